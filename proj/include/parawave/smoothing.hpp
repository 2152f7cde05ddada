#pragma once

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "parawave/cutoffs.hpp"
#include "parawave/measure.hpp"
#include "parawave/symbol.hpp"
#include "parawave/symmetrize.hpp"

namespace parawave::smoothing {

using paradiff::Symbol;
using spectral::GridFunction;
using spectral::PeriodicGrid;
using spectral::Vec;
using spectral::cplx;
using symmetrize::PrincipalSymbols;

// Scale bookkeeping of the smoothing step: h = 2^{-j}, delta = 2/3 exactly,
// h_tilde = sqrt(h).
struct SmoothingParams {
    int j = 4;
    static constexpr double delta = 2.0 / 3.0;

    explicit SmoothingParams(int j_) : j(j_) {
        if (j < 0) throw std::invalid_argument("smoothing: j >= 0");
    }
    double h() const { return std::pow(2.0, -j); }
    double h_tilde() const { return std::pow(2.0, -0.5 * j); }
    double x_cut() const { return std::pow(h(), -delta); }  // spatial cut h^{-delta}
};

inline GridFunction lowpass_at(const GridFunction& f, double cut) {
    return f.apply_multiplier(
        [cut](Vec k) { return cplx(cutoffs::lp_psi(spectral::norm(k) / cut)); });
}

// gamma_delta(x, xi) = psi(h^delta D_x) gamma(x, xi): per-xi spatial low-pass
// of the base symbol, with spectral x-derivatives and centered xi-derivatives.
class SmoothedSymbol {
  public:
    SmoothedSymbol(Symbol base, SmoothingParams sp) : base_(std::move(base)), sp_(sp) {
        if (sp_.x_cut() > base_.grid().nyquist())
            throw std::invalid_argument("smooth_symbol: h^{-delta} beyond grid Nyquist");
        cache_ = std::make_shared<std::map<std::pair<double, double>, GridFunction>>();
    }

    const Symbol& base() const { return base_; }
    const SmoothingParams& params() const { return sp_; }
    const PeriodicGrid& grid() const { return base_.grid(); }

    GridFunction column(const Vec& xi) const {
        auto key = std::make_pair(xi[0], xi[1]);
        auto it = cache_->find(key);
        if (it != cache_->end()) return it->second;
        GridFunction c = lowpass_at(base_.column(xi), sp_.x_cut());
        cache_->emplace(key, c);
        return c;
    }

    // d^alpha_x of the smoothed column (spectral, exact for the trig
    // interpolant).
    GridFunction x_derivative_column(const Vec& xi, const std::array<int, 2>& alpha) const {
        GridFunction c = column(xi);
        for (int rep = 0; rep < alpha[0]; ++rep) c = c.derivative(0);
        for (int rep = 0; rep < alpha[1]; ++rep) c = c.derivative(1);
        return c;
    }

    GridFunction xi_derivative_column(const Vec& xi, const std::array<int, 2>& alpha,
                                      double step) const {
        Symbol wrap = as_symbol();
        return paradiff::xi_derivative_column(wrap, xi, alpha, step);
    }

    // Paradiff-compatible view; separable bases stay separable (the low-pass
    // acts on the x-factor only).
    Symbol as_symbol() const {
        if (base_.x_independent()) return base_;
        if (base_.separable()) {
            auto self = *this;
            return Symbol::separable(lowpass_at(base_.x_factor(), sp_.x_cut()),
                                     [self](Vec xi) { return self.base_.eval_g_factor(xi); },
                                     base_.order, base_.rho);
        }
        auto self = *this;
        Symbol s = Symbol::closed_form(
            base_.grid(), base_.order, base_.rho,
            [self](Vec x, Vec xi) { return self.column(xi).values()[self.base_.lattice_index(x)]; });
        return s;
    }

  private:
    Symbol base_;
    SmoothingParams sp_;
    std::shared_ptr<std::map<std::pair<double, double>, GridFunction>> cache_;
};

inline SmoothedSymbol smooth_symbol(const Symbol& a, const SmoothingParams& sp) {
    return SmoothedSymbol(a, sp);
}

// S_{j delta} V = psi(2^{-j delta} D) V, componentwise.
inline std::vector<GridFunction> smooth_field(const std::vector<GridFunction>& V,
                                              const SmoothingParams& sp) {
    std::vector<GridFunction> out;
    out.reserve(V.size());
    for (const auto& f : V) out.push_back(lowpass_at(f, sp.x_cut()));
    return out;
}
inline GridFunction smooth_field(const GridFunction& f, const SmoothingParams& sp) {
    return lowpass_at(f, sp.x_cut());
}

// det(I + lambda w w^T) for unit w; the closed form is 1 + lambda.
inline double rank_one_det(double lambda, const std::vector<double>& w) {
    std::size_t d = w.size();
    if (d == 1) return 1.0 + lambda * w[0] * w[0];
    if (d == 2) {
        double a = 1.0 + lambda * w[0] * w[0], b = lambda * w[0] * w[1];
        double c = 1.0 + lambda * w[1] * w[1];
        return a * c - b * b;
    }
    if (d == 3) {
        double m[3][3];
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                m[r][c] = (r == c ? 1.0 : 0.0) + lambda * w[std::size_t(r)] * w[std::size_t(c)];
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    }
    throw std::invalid_argument("rank_one_det: d <= 3");
}

// Closed form for |det Hess_xi gamma| with gamma = a^{1/2} (U)^{alpha},
// alpha kept as an argument so tests can probe the |2 alpha - 1| factor:
//   a^{d/2} (2 alpha)^d |2 alpha - 1| det A * U^{(alpha-1) d}.
inline double hessian_det_formula(const PrincipalSymbols& ps, std::size_t idx, const Vec& xi,
                                  double alpha = 0.25) {
    int d = ps.grid().dim;
    double a = ps.a_val(idx);
    double U = ps.U_val(idx, xi);
    return std::pow(a, 0.5 * d) * std::pow(2.0 * alpha, d) * std::abs(2.0 * alpha - 1.0) *
           ps.det_A(idx) * std::pow(U, (alpha - 1.0) * d);
}

namespace detail {

template <class ColFn>
double fd_hessian_det(ColFn&& value_at, int dim, const Vec& xi, double step) {
    // 4th-order centered second derivatives; mixed term by the tensor
    // product of first-derivative stencils.
    auto d2 = [&](int axis) {
        double acc = 0.0;
        double w[5];
        paradiff::detail::fd_weights(2, step, w);
        for (int i = 0; i < 5; ++i) {
            if (w[i] == 0.0) continue;
            Vec p = xi;
            p[std::size_t(axis)] += (i - 2) * step;
            acc += w[i] * value_at(p);
        }
        return acc;
    };
    if (dim == 1) return std::abs(d2(0));
    auto dmix = [&]() {
        double w[5];
        paradiff::detail::fd_weights(1, step, w);
        double acc = 0.0;
        for (int i = 0; i < 5; ++i) {
            if (w[i] == 0.0) continue;
            for (int j = 0; j < 5; ++j) {
                if (w[j] == 0.0) continue;
                Vec p = xi;
                p[0] += (i - 2) * step;
                p[1] += (j - 2) * step;
                acc += w[i] * w[j] * value_at(p);
            }
        }
        return acc;
    };
    double h00 = d2(0), h11 = d2(1), h01 = dmix();
    return std::abs(h00 * h11 - h01 * h01);
}

}  // namespace detail

struct HessianPair {
    double formula_value;
    double fd_value;
};

inline void check_annulus(const Vec& xi) {
    double r = spectral::norm(xi);
    if (r < 0.5 || r > 2.0)
        throw std::invalid_argument("hessian_det: xi must lie in the annulus [1/2, 2]");
}

// Closed form (unsmoothed gamma) against a finite-difference xi-Hessian of
// the same symbol.
inline HessianPair hessian_det(const PrincipalSymbols& ps, std::size_t idx, const Vec& xi,
                               double step = 0.01) {
    check_annulus(xi);
    auto value_at = [&](const Vec& p) { return ps.gamma_val(idx, p); };
    return {hessian_det_formula(ps, idx, xi),
            detail::fd_hessian_det(value_at, ps.grid().dim, xi, step)};
}

// Same comparison with the smoothed symbol on the finite-difference side.
inline HessianPair hessian_det(const PrincipalSymbols& ps, const SmoothedSymbol& sm,
                               std::size_t idx, const Vec& xi, double step = 0.01) {
    check_annulus(xi);
    auto value_at = [&](const Vec& p) { return sm.column(p).values()[idx].real(); };
    return {hessian_det_formula(ps, idx, xi),
            detail::fd_hessian_det(value_at, ps.grid().dim, xi, step)};
}

// Growth of || d^alpha_x gamma_delta ||_inf across a j-scan, reported as the
// fitted exponent of h = 2^{-j} together with the predicted one.
struct GrowthRow {
    std::array<int, 2> alpha;
    double fitted;
    double predicted;
    double r2;
};

inline std::vector<GrowthRow> derivative_growth_scan(const std::vector<Symbol>& bases,
                                                     double base_regularity,
                                                     const std::vector<int>& js, int alpha_max,
                                                     Vec xi_ref = {1.0, 0.0}) {
    std::vector<GrowthRow> rows;
    for (int atot = 1; atot <= alpha_max; ++atot) {
        std::array<int, 2> alpha{atot, 0};
        std::vector<double> hs, vals;
        for (int j : js) {
            double worst = 0.0;  // sup over realizations steadies the estimator
            for (const Symbol& base : bases) {
                SmoothedSymbol sm(base, SmoothingParams(j));
                worst = std::max(worst, sm.x_derivative_column(xi_ref, alpha).sup_norm());
            }
            hs.push_back(std::pow(2.0, -j));
            vals.push_back(worst);
        }
        auto fit = measure::fit_power_law(hs, vals);
        rows.push_back({alpha, fit.exponent,
                        -SmoothingParams::delta * (atot - base_regularity), fit.r2});
    }
    return rows;
}

inline std::vector<GrowthRow> derivative_growth_scan(const Symbol& base, double base_regularity,
                                                     const std::vector<int>& js, int alpha_max,
                                                     Vec xi_ref = {1.0, 0.0}) {
    return derivative_growth_scan(std::vector<Symbol>{base}, base_regularity, js, alpha_max,
                                  xi_ref);
}

}  // namespace parawave::smoothing
