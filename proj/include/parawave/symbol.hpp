#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <utility>

#include "parawave/dyadic.hpp"
#include "parawave/grid.hpp"

namespace parawave::paradiff {

using spectral::GridFunction;
using spectral::PeriodicGrid;
using spectral::Vec;
using spectral::cplx;

// A symbol a(x,xi) of declared order m and x-regularity rho, evaluated
// either from a closed form or as per-xi grid functions.  Separable symbols
// f(x) g(xi) carry their factorization so the quantization can reuse one
// x-transform for every xi.
class Symbol {
  public:
    double order = 0.0;
    double rho = 0.5;
    bool homogeneous = false;

    static Symbol closed_form(const PeriodicGrid& g, double order, double rho,
                              std::function<cplx(Vec x, Vec xi)> eval) {
        Symbol s;
        s.grid_ = g;
        s.order = order;
        s.rho = rho;
        s.eval_ = std::move(eval);
        return s;
    }

    // a(x,xi) = f(x) * gfac(xi).
    static Symbol separable(GridFunction f, std::function<cplx(Vec xi)> gfac, double order,
                            double rho) {
        Symbol s;
        s.grid_ = f.grid();
        s.order = order;
        s.rho = rho;
        s.xfac_ = std::make_shared<GridFunction>(std::move(f));
        s.gfac_ = std::move(gfac);
        return s;
    }

    // x-independent symbol m(xi); rho = 0 since x-norms reduce to |m|.
    static Symbol multiplier(const PeriodicGrid& g, std::function<cplx(Vec xi)> m, double order) {
        Symbol s;
        s.grid_ = g;
        s.order = order;
        s.rho = 0.0;
        s.mult_ = std::move(m);
        return s;
    }

    const PeriodicGrid& grid() const { return grid_; }
    bool x_independent() const { return bool(mult_); }
    bool separable() const { return bool(xfac_); }
    const GridFunction& x_factor() const { return *xfac_; }
    cplx eval_g_factor(const Vec& xi) const { return gfac_ ? gfac_(xi) : cplx(1.0); }

    cplx eval(const Vec& x, const Vec& xi) const {
        if (mult_) return mult_(xi);
        if (xfac_) {
            // x must be a lattice point for tabulated factors.
            std::size_t idx = lattice_index(x);
            return xfac_->values()[idx] * gfac_(xi);
        }
        return eval_(x, xi);
    }

    // The x-column x -> a(x, xi) as a grid function.
    GridFunction column(const Vec& xi) const {
        if (mult_) {
            cplx c = mult_(xi);
            std::vector<cplx> v(grid_.size(), c);
            return GridFunction::from_values(grid_, std::move(v));
        }
        if (xfac_) return gfac_(xi) * (*xfac_);
        return GridFunction::sample(grid_, [&](Vec x) { return eval_(x, xi); });
    }

    std::size_t lattice_index(const Vec& x) const {
        double h = grid_.spacing();
        auto snap = [&](double c) {
            long i = std::lround(c / h);
            long n = grid_.n;
            return std::size_t(((i % n) + n) % n);
        };
        if (grid_.dim == 1) return snap(x[0]);
        return snap(x[0]) * grid_.n + snap(x[1]);
    }

  private:
    PeriodicGrid grid_;
    std::function<cplx(Vec, Vec)> eval_;
    std::shared_ptr<GridFunction> xfac_;
    std::function<cplx(Vec)> gfac_;
    std::function<cplx(Vec)> mult_;
};

namespace detail {

// 4th-order centered stencil for d^k/dt^k with k = 0..2 on 5 points.
inline void fd_weights(int k, double h, double w[5]) {
    switch (k) {
        case 0:
            w[0] = w[1] = w[3] = w[4] = 0.0;
            w[2] = 1.0;
            break;
        case 1: {
            double c = 1.0 / (12.0 * h);
            w[0] = c;
            w[1] = -8.0 * c;
            w[2] = 0.0;
            w[3] = 8.0 * c;
            w[4] = -c;
            break;
        }
        case 2: {
            double c = 1.0 / (12.0 * h * h);
            w[0] = -c;
            w[1] = 16.0 * c;
            w[2] = -30.0 * c;
            w[3] = 16.0 * c;
            w[4] = -c;
            break;
        }
        case 3: {  // second-order central
            double c = 1.0 / (2.0 * h * h * h);
            w[0] = -c;
            w[1] = 2.0 * c;
            w[2] = 0.0;
            w[3] = -2.0 * c;
            w[4] = c;
            break;
        }
        case 4: {  // second-order central
            double c = 1.0 / (h * h * h * h);
            w[0] = c;
            w[1] = -4.0 * c;
            w[2] = 6.0 * c;
            w[3] = -4.0 * c;
            w[4] = c;
            break;
        }
        default:
            throw std::invalid_argument("fd_weights: order > 4 not tabulated");
    }
}

}  // namespace detail

// xi-derivative column d^alpha_xi a(., xi) by nested 4th-order centered
// differences.  alpha is a per-axis multi-index.
inline GridFunction xi_derivative_column(const Symbol& a, const Vec& xi,
                                         const std::array<int, 2>& alpha, double step) {
    int a0 = alpha[0], a1 = alpha[1];
    if (a0 + a1 == 0) return a.column(xi);
    double w0[5], w1[5];
    detail::fd_weights(a0, step, w0);
    detail::fd_weights(a1, step, w1);
    GridFunction acc = GridFunction::zero(a.grid());
    for (int i = 0; i < 5; ++i) {
        if (a0 > 0 && w0[i] == 0.0) continue;
        for (int j = 0; j < 5; ++j) {
            if (a1 > 0 && w1[j] == 0.0) continue;
            double c = (a0 > 0 ? w0[i] : (i == 2 ? 1.0 : 0.0)) *
                       (a1 > 0 ? w1[j] : (j == 2 ? 1.0 : 0.0));
            if (c == 0.0) continue;
            Vec p = xi;
            p[0] += (i - 2) * (a0 > 0 ? step : 0.0);
            p[1] += (j - 2) * (a1 > 0 ? step : 0.0);
            acc += c * a.column(p);
        }
    }
    return acc;
}

// M^m_rho(a): sup over |alpha| <= alpha_max and sampled |xi| >= 1/2 of
// <xi>^{|alpha|-m} || d^alpha_xi a(., xi) ||_{W^{rho,inf}}, realized with the
// dyadic Hoelder norm.  rho = 0 uses the plain sup norm; other integer rho is
// rejected with the norm itself.
inline double symbol_seminorm(const Symbol& a, int alpha_max,
                              std::optional<double> rho_override = std::nullopt) {
    const PeriodicGrid& g = a.grid();
    std::vector<double> radii;
    for (double r = 0.5; r <= g.nyquist() / 2 + 1e-9; r *= 2.0) radii.push_back(r);
    std::vector<Vec> dirs;
    if (g.dim == 1) {
        dirs = {{1.0, 0.0}, {-1.0, 0.0}};
    } else {
        for (int k = 0; k < 8; ++k) {
            double th = 2.0 * spectral::pi * k / 8.0;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
    }
    std::vector<std::array<int, 2>> alphas;
    for (int t = 0; t <= alpha_max; ++t)
        for (int i = 0; i <= t; ++i)
            if (g.dim == 2 || i == 0) alphas.push_back({t - i, i});

    double rho = rho_override.value_or(a.rho);
    double m = 0.0;
    for (double r : radii)
        for (const Vec& d : dirs) {
            Vec xi{r * d[0], r * d[1]};
            double step = std::pow(2.0, -6.0) * std::max(1.0, r / 2.0);
            for (const auto& al : alphas) {
                GridFunction col = xi_derivative_column(a, xi, al, step);
                double w = std::pow(1.0 + r * r, 0.5 * (al[0] + al[1] - a.order));
                double xnorm = rho == 0.0 ? col.sup_norm()
                                          : spectral::dyadic_holder_norm(col, rho);
                m = std::max(m, w * xnorm);
            }
        }
    return m;
}

}  // namespace parawave::paradiff
