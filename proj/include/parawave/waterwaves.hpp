#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "parawave/grid.hpp"

namespace parawave::waterwaves {

using spectral::GridFunction;
using spectral::PeriodicGrid;
using spectral::Vec;
using spectral::cplx;

struct FluidParams {
    double gravity = 1.0;
    double depth = std::numeric_limits<double>::infinity();  // infinite by default
    int dn_order = 3;                                        // Craig-Sulem order M
    double strip_margin_frac = 0.25;  // required clearance as a fraction of depth

    void validate() const {
        if (!(gravity > 0.0)) throw std::invalid_argument("fluid: gravity must be positive");
        if (!(depth > 0.0)) throw std::invalid_argument("fluid: depth must be positive");
        if (dn_order < 0 || dn_order > 4)
            throw std::invalid_argument("fluid: dn_order must be in [0,4]");
    }
    bool infinite_depth() const { return std::isinf(depth); }
};

// Surface pair (eta, psi) at one time.
struct WaveState {
    GridFunction eta;
    GridFunction psi;
    double t = 0.0;
};

struct TraceFields {
    GridFunction B;
    std::vector<GridFunction> V;
    GridFunction a;
    double min_a = 0.0;
    bool taylor_sign_ok = true;
};

inline void check_strip(const GridFunction& eta, const FluidParams& p) {
    if (p.infinite_depth()) return;
    double m = 0.0;
    bool first = true;
    for (const auto& v : eta.values()) {
        double r = v.real();
        if (first || r < m) m = r, first = false;
    }
    if (m + p.depth < p.strip_margin_frac * p.depth)
        throw std::invalid_argument("strip condition violated: min(eta)+depth too small");
}

namespace detail {

// Vertical-derivative multiplier L_m: d^m_y of the harmonic extension at the
// mean level, i.e. |xi|^m tanh(depth |xi|)^{m mod 2} (plain |xi|^m at
// infinite depth).
inline GridFunction vertical_multiplier(const GridFunction& f, int m, const FluidParams& p) {
    if (m == 0) return f;
    bool inf = p.infinite_depth();
    double H = p.depth;
    return f.apply_multiplier([m, inf, H](Vec k) {
        double r = spectral::norm(k);
        double w = std::pow(r, m);
        if (!inf && (m % 2 == 1)) w *= std::tanh(H * r);
        return cplx(w);
    });
}

}  // namespace detail

// Dirichlet-Neumann operator by the truncated Craig-Sulem expansion
// G(eta) f = sum_{m=0}^{M} G_m(eta) f.  The recursion works through the
// Taylor coefficients of the harmonic extension at the mean level:
//   phi0^{(0)} = f,  phi0^{(m)} = -sum_{k=1}^{m} (eta^k/k!) L_k phi0^{(m-k)},
//   G_m f = sum_{k=0}^m (eta^k/k!) L_{k+1} phi0^{(m-k)}
//           - grad(eta) . sum_{k=0}^{m-1} (eta^k/k!) grad L_k phi0^{(m-1-k)}.
// For eta = 0 this reduces exactly to the flat multiplier.
inline GridFunction dn_apply(const GridFunction& eta, const GridFunction& f,
                             const FluidParams& p) {
    p.validate();
    check_strip(eta, p);
    const PeriodicGrid& g = f.grid();
    const int M = p.dn_order;

    // eta^k / k! (dealiased powers)
    std::vector<GridFunction> eta_pow{GridFunction::sample(g, [](Vec) { return cplx(1.0); })};
    for (int k = 1; k <= M; ++k)
        eta_pow.push_back((1.0 / k) * spectral::multiply_dealiased(eta_pow.back(), eta));

    std::vector<GridFunction> grad_eta = eta.gradient();

    std::vector<GridFunction> phi0{f};
    for (int m = 1; m <= M; ++m) {
        GridFunction acc = GridFunction::zero(g);
        for (int k = 1; k <= m; ++k)
            acc += spectral::multiply_dealiased(
                eta_pow[std::size_t(k)], detail::vertical_multiplier(phi0[std::size_t(m - k)], k, p));
        phi0.push_back(-1.0 * acc);
    }

    // k = 0 factors multiply by one; apply the operand directly so the flat
    // case stays bit-exact on the whole lattice.
    auto weighted = [&](int k, const GridFunction& op) {
        if (k == 0) return op;
        return spectral::multiply_dealiased(eta_pow[std::size_t(k)], op);
    };

    GridFunction result = GridFunction::zero(g);
    for (int m = 0; m <= M; ++m) {
        GridFunction gm = GridFunction::zero(g);
        for (int k = 0; k <= m; ++k)
            gm += weighted(k, detail::vertical_multiplier(phi0[std::size_t(m - k)], k + 1, p));
        if (m >= 1) {
            for (int a = 0; a < g.dim; ++a) {
                GridFunction acc = GridFunction::zero(g);
                for (int k = 0; k <= m - 1; ++k)
                    acc += weighted(
                        k, detail::vertical_multiplier(phi0[std::size_t(m - 1 - k)], k, p)
                               .derivative(a));
                gm = gm - spectral::multiply_dealiased(grad_eta[std::size_t(a)], acc);
            }
        }
        result += gm;
    }
    return result.real_part();
}

// Right-hand side of the Craig-Sulem-Zakharov system.
struct CszRhs {
    GridFunction deta;
    GridFunction dpsi;
};

inline CszRhs csz_rhs(const WaveState& w, const FluidParams& p) {
    const PeriodicGrid& g = w.eta.grid();
    GridFunction Gpsi = dn_apply(w.eta, w.psi, p);
    auto grad_eta = w.eta.gradient();
    auto grad_psi = w.psi.gradient();

    GridFunction grad_eta_sq = GridFunction::zero(g);
    GridFunction grad_psi_sq = GridFunction::zero(g);
    GridFunction grad_dot = GridFunction::zero(g);
    for (int a = 0; a < g.dim; ++a) {
        grad_eta_sq += spectral::multiply_dealiased(grad_eta[a], grad_eta[a]);
        grad_psi_sq += spectral::multiply_dealiased(grad_psi[a], grad_psi[a]);
        grad_dot += spectral::multiply_dealiased(grad_eta[a], grad_psi[a]);
    }
    GridFunction num = grad_dot + Gpsi;  // grad(eta).grad(psi) + G(eta)psi
    GridFunction num_sq = spectral::multiply_dealiased(num, num);
    // 1/(1+|grad eta|^2), computed pointwise (bounded smooth function).
    std::vector<cplx> invv(g.size());
    for (std::size_t i = 0; i < invv.size(); ++i)
        invv[i] = 1.0 / (1.0 + grad_eta_sq.values()[i].real());
    GridFunction inv = GridFunction::from_values(g, std::move(invv));

    GridFunction dpsi = (-p.gravity) * w.eta - 0.5 * grad_psi_sq +
                        0.5 * spectral::multiply_dealiased(num_sq, inv);
    return {Gpsi.real_part(), dpsi.real_part()};
}

// Dispersion-limited step cap 0.5 / max|xi|^{1/2} (scaled by sqrt(g)).
inline double csz_dt_cap(const PeriodicGrid& g, const FluidParams& p) {
    double kmax = g.nyquist() * std::sqrt(double(g.dim));
    return 0.5 / std::sqrt(p.gravity * kmax);
}

// One explicit RK4 step of the CSZ system; the result stays real and must
// satisfy the strip condition.
inline WaveState csz_step(const WaveState& w, const FluidParams& p, double dt) {
    if (std::abs(dt) > csz_dt_cap(w.eta.grid(), p))
        throw std::invalid_argument("csz_step: dt beyond the dispersion cap");
    auto stage = [&](const WaveState& s) { return csz_rhs(s, p); };
    CszRhs k1 = stage(w);
    WaveState w2{w.eta + (0.5 * dt) * k1.deta, w.psi + (0.5 * dt) * k1.dpsi, w.t + 0.5 * dt};
    CszRhs k2 = stage(w2);
    WaveState w3{w.eta + (0.5 * dt) * k2.deta, w.psi + (0.5 * dt) * k2.dpsi, w.t + 0.5 * dt};
    CszRhs k3 = stage(w3);
    WaveState w4{w.eta + dt * k3.deta, w.psi + dt * k3.dpsi, w.t + dt};
    CszRhs k4 = stage(w4);
    double c = dt / 6.0;
    WaveState out{
        (w.eta + c * (k1.deta + 2.0 * k2.deta + 2.0 * k3.deta + k4.deta)).real_part(),
        (w.psi + c * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi)).real_part(),
        w.t + dt};
    check_strip(out.eta, p);
    return out;
}

// Traces B, V and the Taylor coefficient a = g + D_t B, with the time
// derivative of B taken by one-sided differencing along the flow.
inline TraceFields traces_and_taylor(const WaveState& w, const FluidParams& p,
                                     std::optional<double> dt_probe = std::nullopt) {
    const PeriodicGrid& g = w.eta.grid();
    auto compute_BV = [&](const WaveState& s) {
        GridFunction Gpsi = dn_apply(s.eta, s.psi, p);
        auto grad_eta = s.eta.gradient();
        auto grad_psi = s.psi.gradient();
        GridFunction grad_eta_sq = GridFunction::zero(g);
        GridFunction grad_dot = GridFunction::zero(g);
        for (int a = 0; a < g.dim; ++a) {
            grad_eta_sq += spectral::multiply_dealiased(grad_eta[a], grad_eta[a]);
            grad_dot += spectral::multiply_dealiased(grad_eta[a], grad_psi[a]);
        }
        std::vector<cplx> invv(g.size());
        for (std::size_t i = 0; i < invv.size(); ++i)
            invv[i] = 1.0 / (1.0 + grad_eta_sq.values()[i].real());
        GridFunction inv = GridFunction::from_values(g, std::move(invv));
        GridFunction B =
            spectral::multiply_dealiased(grad_dot + Gpsi, inv).real_part();
        std::vector<GridFunction> V;
        for (int a = 0; a < g.dim; ++a)
            V.push_back((grad_psi[a] - spectral::multiply_dealiased(B, grad_eta[a])).real_part());
        return std::pair<GridFunction, std::vector<GridFunction>>{B, V};
    };

    auto [B, V] = compute_BV(w);

    // One Euler probe step; dt small against both the fastest retained wave
    // and the dispersion cap.
    double dt = dt_probe.value_or(
        std::min(1e-4 / std::sqrt(p.gravity), 0.1 * csz_dt_cap(g, p)));
    CszRhs rhs = csz_rhs(w, p);
    WaveState wp{(w.eta + dt * rhs.deta).real_part(), (w.psi + dt * rhs.dpsi).real_part(),
                 w.t + dt};
    auto [Bp, Vp] = compute_BV(wp);

    GridFunction dBdt = (1.0 / dt) * (Bp - B);
    GridFunction conv = GridFunction::zero(g);
    auto grad_B = B.gradient();
    for (int a = 0; a < g.dim; ++a)
        conv += spectral::multiply_dealiased(V[std::size_t(a)], grad_B[std::size_t(a)]);
    GridFunction a_field = GridFunction::sample(g, [&](Vec) { return cplx(p.gravity); }) +
                           (dBdt + conv).real_part();

    TraceFields tf{B, V, a_field.real_part()};
    double mn = a_field.values()[0].real();
    for (const auto& v : a_field.values()) mn = std::min(mn, v.real());
    tf.min_a = mn;
    tf.taylor_sign_ok = mn > 0.0;
    return tf;
}

// Conserved energy, kinetic part rewritten on the boundary:
//   E = 1/2 <psi, G(eta) psi> + (g/2) ||eta||^2_{L^2(dx)}.
inline double energy(const WaveState& w, const FluidParams& p) {
    GridFunction Gpsi = dn_apply(w.eta, w.psi, p);
    double kin = 0.5 * spectral::inner_integral(w.psi, Gpsi).real();
    double pot = 0.5 * p.gravity * spectral::inner_integral(w.eta, w.eta).real();
    return kin + pot;
}

// Dyadic scaling transform on the torus: spectra move xi -> lambda xi with
// amplitudes eta: lambda^{-1}, psi: lambda^{-3/2}.  Exact invariance of the
// evolution holds in infinite depth only (time rescales by sqrt(lambda)).
inline WaveState scaling_transform(const WaveState& w, double lam) {
    double l2 = std::log2(lam);
    if (!(lam > 0.0) || l2 != std::floor(l2))
        throw std::invalid_argument("scaling_transform: lambda must be a power of two");
    const PeriodicGrid& g = w.eta.grid();
    auto move = [&](const GridFunction& f, double amp) {
        std::vector<cplx> out(g.size(), cplx(0.0));
        double lost = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            cplx c = f.spectrum()[i];
            if (c == cplx(0.0)) continue;
            Vec k = g.freq(i);
            double t0 = k[0] * lam, t1 = k[1] * lam;
            bool rep = t0 == std::floor(t0) && t1 == std::floor(t1) &&
                       std::abs(t0) <= g.nyquist() - 1 &&
                       (g.dim == 1 || std::abs(t1) <= g.nyquist() - 1);
            if (!rep) {
                lost = std::max(lost, std::abs(c));
                continue;
            }
            out[g.spec_index(int(t0), int(t1))] += amp * c;
        }
        if (lost > 1e-13)
            throw std::invalid_argument("scaling_transform: spectrum does not map to the lattice");
        return GridFunction::from_spectrum(g, std::move(out));
    };
    return {move(w.eta, 1.0 / lam), move(w.psi, std::pow(lam, -1.5)), w.t / std::sqrt(lam)};
}

}  // namespace parawave::waterwaves
