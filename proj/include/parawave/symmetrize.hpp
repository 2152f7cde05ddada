#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "parawave/paradiff.hpp"
#include "parawave/waterwaves.hpp"

namespace parawave::symmetrize {

using paradiff::Symbol;
using spectral::GridFunction;
using spectral::PeriodicGrid;
using spectral::Vec;
using spectral::cplx;
using waterwaves::TraceFields;
using waterwaves::WaveState;

// Principal symbols of the symmetrized system, built from (grad eta, a):
//   lambda = sqrt(U),  U = (1+|grad eta|^2)|xi|^2 - (xi . grad eta)^2,
//   gamma  = (a^2 U)^{1/4} = sqrt(a lambda),  q = sqrt(a / lambda).
class PrincipalSymbols {
  public:
    PrincipalSymbols(GridFunction a, std::vector<GridFunction> grad_eta)
        : a_(std::move(a)), grad_eta_(std::move(grad_eta)) {
        min_a_ = a_.values()[0].real();
        for (const auto& v : a_.values()) min_a_ = std::min(min_a_, v.real());
        if (min_a_ <= 0.0)
            throw std::invalid_argument("principal symbols: Taylor coefficient must be positive");
    }

    const PeriodicGrid& grid() const { return a_.grid(); }
    double min_a() const { return min_a_; }
    const GridFunction& a_field() const { return a_; }
    const std::vector<GridFunction>& grad_eta() const { return grad_eta_; }

    double a_val(std::size_t idx) const { return a_.values()[idx].real(); }

    double U_val(std::size_t idx, const Vec& xi) const {
        double g2 = 0.0, dotp = 0.0;
        for (int c = 0; c < grid().dim; ++c) {
            double ge = grad_eta_[std::size_t(c)].values()[idx].real();
            g2 += ge * ge;
            dotp += ge * xi[std::size_t(c)];
        }
        return (1.0 + g2) * spectral::dot(xi, xi) - dotp * dotp;
    }

    // A = (1+|grad eta|^2) I - grad eta (x) grad eta, so U = <A xi, xi>.
    // In one dimension A collapses to the scalar 1.
    double det_A(std::size_t idx) const {
        if (grid().dim == 1) return 1.0;
        double e0 = grad_eta_[0].values()[idx].real();
        double e1 = grad_eta_[1].values()[idx].real();
        double s = 1.0 + e0 * e0 + e1 * e1;
        double a00 = s - e0 * e0, a01 = -e0 * e1, a11 = s - e1 * e1;
        return a00 * a11 - a01 * a01;
    }

    double lambda_val(std::size_t idx, const Vec& xi) const { return std::sqrt(U_val(idx, xi)); }
    double gamma_val(std::size_t idx, const Vec& xi) const {
        return std::pow(a_val(idx) * a_val(idx) * U_val(idx, xi), 0.25);
    }
    double q_val(std::size_t idx, const Vec& xi) const {
        return std::sqrt(a_val(idx) / lambda_val(idx, xi));
    }

    // In one dimension lambda = |xi| identically, so gamma and q factor into
    // sqrt(a(x)) times a multiplier; the quantization exploits that.
    Symbol gamma_symbol() const {
        if (grid().dim == 1) {
            GridFunction sq = sqrt_field(a_);
            return Symbol::separable(
                sq, [](Vec k) { return cplx(std::sqrt(spectral::norm(k))); }, 0.5, 0.5);
        }
        auto self = *this;
        return Symbol::closed_form(grid(), 0.5, 0.5, [self](Vec x, Vec xi) {
            return cplx(self.gamma_val(self.lattice_index(x), xi));
        });
    }
    Symbol lambda_symbol() const {
        if (grid().dim == 1)
            return Symbol::multiplier(
                grid(), [](Vec k) { return cplx(spectral::norm(k)); }, 1.0);
        auto self = *this;
        return Symbol::closed_form(grid(), 1.0, 0.5, [self](Vec x, Vec xi) {
            return cplx(self.lambda_val(self.lattice_index(x), xi));
        });
    }
    Symbol q_symbol() const {
        if (grid().dim == 1) {
            GridFunction sq = sqrt_field(a_);
            return Symbol::separable(
                sq, [](Vec k) { return cplx(1.0 / std::sqrt(spectral::norm(k))); }, -0.5, 0.5);
        }
        auto self = *this;
        return Symbol::closed_form(grid(), -0.5, 0.5, [self](Vec x, Vec xi) {
            return cplx(self.q_val(self.lattice_index(x), xi));
        });
    }

    std::size_t lattice_index(const Vec& x) const {
        double h = grid().spacing();
        auto snap = [&](double c) {
            long i = std::lround(c / h);
            long n = grid().n;
            return std::size_t(((i % n) + n) % n);
        };
        if (grid().dim == 1) return snap(x[0]);
        return snap(x[0]) * std::size_t(grid().n) + snap(x[1]);
    }

  private:
    static GridFunction sqrt_field(const GridFunction& f) {
        std::vector<cplx> v(f.values().size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sqrt(f.values()[i].real());
        return GridFunction::from_values(f.grid(), std::move(v));
    }

    GridFunction a_;
    std::vector<GridFunction> grad_eta_;
    double min_a_;
};

inline PrincipalSymbols principal_symbols(const TraceFields& tf, const GridFunction& eta) {
    return PrincipalSymbols(tf.a, eta.gradient());
}

// zeta_s, U_s, theta_s and u = <D>^{-s}(U_s - i theta_s), componentwise in
// the d directions.
struct ReducedState {
    std::vector<GridFunction> zeta_s;
    std::vector<GridFunction> U_s;
    std::vector<GridFunction> theta_s;
    std::vector<GridFunction> u;
};

namespace detail {
inline GridFunction bracket_power(const GridFunction& f, double s) {
    return f.apply_multiplier(
        [s](Vec k) { return cplx(std::pow(1.0 + spectral::dot(k, k), s / 2.0)); });
}
}  // namespace detail

inline ReducedState reduced_unknown(const WaveState& w, const TraceFields& tf, double s,
                                    const cutoffs::AdmissibleCutoff& cut = {}) {
    PrincipalSymbols ps = principal_symbols(tf, w.eta);
    Symbol q = ps.q_symbol();
    const int d = w.eta.grid().dim;

    ReducedState r;
    GridFunction Bs = detail::bracket_power(tf.B, s);
    for (int c = 0; c < d; ++c) {
        GridFunction zeta = w.eta.derivative(c);
        GridFunction zs = detail::bracket_power(zeta, s);
        GridFunction Us =
            detail::bracket_power(tf.V[std::size_t(c)], s) + paradiff::paraproduct_apply(zeta, Bs, cut);
        GridFunction th = paradiff::paradiff_apply(q, zs, cut);
        r.zeta_s.push_back(zs);
        r.U_s.push_back(Us);
        r.theta_s.push_back(th);
        r.u.push_back(detail::bracket_power(Us - cplx(0.0, 1.0) * th, -s));
    }
    return r;
}

// || f(t) ||_{H^s} for f = d_t u + (1/2)(T_V . grad + grad . T_V) u + i T_gamma u,
// with the time derivative taken by 4th-order differencing of the sampled
// trajectory.  Returns interior samples only.
struct ResidualSeries {
    std::vector<double> t;
    std::vector<double> hs_norm;
};

inline ResidualSeries equation_residual(const std::vector<double>& t,
                                        const std::vector<ReducedState>& states,
                                        const std::vector<TraceFields>& traces,
                                        const std::vector<PrincipalSymbols>& symbols, double s,
                                        const cutoffs::AdmissibleCutoff& cut = {}) {
    if (t.size() < 5) throw std::invalid_argument("equation_residual: need >= 5 time samples");
    if (states.size() != t.size() || traces.size() != t.size() || symbols.size() != t.size())
        throw std::invalid_argument("equation_residual: inconsistent trajectory");
    double dt = t[1] - t[0];
    for (std::size_t i = 1; i + 1 < t.size(); ++i)
        if (std::abs((t[i + 1] - t[i]) - dt) > 1e-10 * std::abs(dt))
            throw std::invalid_argument("equation_residual: non-uniform time grid");

    ResidualSeries out;
    const std::size_t d = states[0].u.size();
    for (std::size_t i = 2; i + 2 < t.size(); ++i) {
        Symbol gam = symbols[i].gamma_symbol();
        double acc = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            GridFunction dtu = (1.0 / (12.0 * dt)) *
                               (states[i - 2].u[c] - 8.0 * states[i - 1].u[c] +
                                8.0 * states[i + 1].u[c] - 1.0 * states[i + 2].u[c]);
            GridFunction conv =
                0.5 * (paradiff::transport_paraproduct(traces[i].V, states[i].u[c], cut) +
                       paradiff::transport_divergence(traces[i].V, states[i].u[c], cut));
            GridFunction f =
                dtu + conv + cplx(0.0, 1.0) * paradiff::paradiff_apply(gam, states[i].u[c], cut);
            acc += f.sobolev(s) * f.sobolev(s);
        }
        out.t.push_back(t[i]);
        out.hs_norm.push_back(std::sqrt(acc));
    }
    return out;
}

// N_k(gamma) = sum_{|beta| <= k} sup over the annulus {1/10 <= |xi| <= 10}
// and the x-lattice of |d^beta_xi gamma|; xi-derivatives by recursive
// centered differences.
inline double gamma_seminorm(const PrincipalSymbols& ps, int k) {
    if (k > 6) throw std::invalid_argument("gamma_seminorm: k <= 6");
    const int d = ps.grid().dim;

    std::function<GridFunction(std::array<int, 2>, Vec, double)> col =
        [&](std::array<int, 2> beta, Vec xi, double h) -> GridFunction {
        if (beta[0] == 0 && beta[1] == 0) {
            return GridFunction::sample(ps.grid(), [&](Vec x) {
                return cplx(ps.gamma_val(ps.lattice_index(x), xi));
            });
        }
        int axis = beta[0] > 0 ? 0 : 1;
        std::array<int, 2> down = beta;
        down[std::size_t(axis)] -= 1;
        Vec xp = xi, xm = xi;
        xp[std::size_t(axis)] += h;
        xm[std::size_t(axis)] -= h;
        return (1.0 / (2.0 * h)) * (col(down, xp, h) - col(down, xm, h));
    };

    std::vector<Vec> dirs;
    if (d == 1) {
        dirs = {{1.0, 0.0}, {-1.0, 0.0}};
    } else {
        for (int m = 0; m < 8; ++m) {
            double th = 2.0 * spectral::pi * m / 8.0;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
    }
    std::vector<double> radii;
    for (int m = 0; m <= 16; ++m)
        radii.push_back(0.1 * std::pow(100.0, m / 16.0));  // log-spaced in [1/10, 10]

    std::vector<std::array<int, 2>> betas;
    for (int tot = 0; tot <= k; ++tot)
        for (int i = 0; i <= tot; ++i)
            if (d == 2 || i == 0) betas.push_back({tot - i, i});

    double total = 0.0;
    for (const auto& b : betas) {
        double sup = 0.0;
        for (double r : radii)
            for (const Vec& dir : dirs) {
                Vec xi{r * dir[0], r * dir[1]};
                double h = 0.02 * std::max(0.25, r);
                sup = std::max(sup, col(b, xi, h).sup_norm());
            }
        total += sup;
    }
    return total;
}

}  // namespace parawave::symmetrize
