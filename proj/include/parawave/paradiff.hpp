#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "parawave/cutoffs.hpp"
#include "parawave/dyadic.hpp"
#include "parawave/grid.hpp"
#include "parawave/symbol.hpp"

namespace parawave::paradiff {

using cutoffs::AdmissibleCutoff;

namespace detail {

// Integer frequencies theta with |theta| <= r on the lattice of grid g.
inline std::vector<std::array<int, 2>> ball_freqs(const PeriodicGrid& g, double r) {
    std::vector<std::array<int, 2>> out;
    int R = int(std::floor(r));
    R = std::min(R, g.n / 2 - 1);
    if (g.dim == 1) {
        for (int k = -R; k <= R; ++k) out.push_back({k, 0});
    } else {
        for (int k0 = -R; k0 <= R; ++k0)
            for (int k1 = -R; k1 <= R; ++k1)
                if (k0 * k0 + k1 * k1 <= r * r) out.push_back({k0, k1});
    }
    return out;
}

// Output mode eta + theta, or npos when it leaves the representable lattice
// (contributions beyond Nyquist are dropped rather than aliased).
inline std::size_t shifted_index(const PeriodicGrid& g, const Vec& eta,
                                 const std::array<int, 2>& th) {
    int k0 = int(eta[0]) + th[0];
    int k1 = int(eta[1]) + th[1];
    int half = g.n / 2;
    if (k0 < -half || k0 >= half) return std::size_t(-1);
    if (g.dim == 2 && (k1 < -half || k1 >= half)) return std::size_t(-1);
    return g.spec_index(k0, g.dim == 2 ? k1 : 0);
}

}  // namespace detail

// Bony quantization on the lattice:
//   (T_a u)^(xi) = sum_eta chi(xi - eta, eta) a^(xi - eta, eta) psi_low(eta) u^(eta),
// where a^(., eta) is the discrete x-transform of the symbol column at eta.
// Direct reference path; cost O(N^d * (eps2 N)^d).
inline GridFunction paradiff_apply(const Symbol& a, const GridFunction& u,
                                   const AdmissibleCutoff& cut = {}) {
    const PeriodicGrid& g = u.grid();
    if (!(a.grid() == g)) throw std::invalid_argument("paradiff_apply: grid mismatch");
    std::vector<cplx> out(g.size(), cplx(0.0));

    // Precompute the x-transform of the separable/x-independent part once.
    std::vector<cplx> fx_hat;
    bool fast = a.x_independent() || a.separable();
    if (a.separable()) fx_hat = a.x_factor().spectrum();

    for (std::size_t ie = 0; ie < g.size(); ++ie) {
        Vec eta = g.freq(ie);
        double ne = spectral::norm(eta);
        double pl = cut.psi_low(ne);
        cplx ue = u.spectrum()[ie];
        if (pl == 0.0 || ue == cplx(0.0)) continue;
        cplx base = pl * ue;

        const std::vector<cplx>* ahat = nullptr;
        std::vector<cplx> col_hat;
        cplx const_val = 0.0;
        if (a.x_independent()) {
            const_val = a.eval({0.0, 0.0}, eta);
        } else if (a.separable()) {
            const_val = a.eval_g_factor(eta);
            ahat = &fx_hat;
        } else {
            col_hat = a.column(eta).spectrum();
            ahat = &col_hat;
        }

        if (a.x_independent()) {
            // chi(0, eta) = 1 for eta != 0.
            out[ie] += const_val * base;
            continue;
        }
        for (const auto& th : detail::ball_freqs(g, cut.eps2 * ne)) {
            double nth = std::sqrt(double(th[0]) * th[0] + double(th[1]) * th[1]);
            double w = cut.chi(nth, ne);
            if (w == 0.0) continue;
            cplx av = (*ahat)[g.spec_index(th[0], th[1])] * const_val;
            if (av == cplx(0.0)) continue;
            std::size_t io = detail::shifted_index(g, eta, th);
            if (io == std::size_t(-1)) continue;
            out[io] += w * av * base;
        }
    }
    return GridFunction::from_spectrum(g, std::move(out));
}

// T_f u for a plain function f: the xi-independent symbol a(x,xi) = f(x).
inline GridFunction paraproduct_apply(const GridFunction& f, const GridFunction& u,
                                      const AdmissibleCutoff& cut = {}) {
    Symbol s = Symbol::separable(f, [](Vec) { return cplx(1.0); }, 0.0, 1.0);
    return paradiff_apply(s, u, cut);
}

// Littlewood-Paley fast path T_f u ~ sum_j S_{j-3}(f) Delta_j u, cross-checked
// against the direct quantization in the tests.
inline GridFunction lp_paraproduct(const GridFunction& f, const GridFunction& u) {
    spectral::DyadicPartition lp(u.grid());
    GridFunction acc = GridFunction::zero(u.grid());
    for (int j = 2; j <= lp.j_max(); ++j) {
        GridFunction flow = (j >= 3) ? lp.s_low(f, j - 3) : GridFunction::zero(u.grid());
        acc += pointwise(flow, lp.delta(u, j));
    }
    return acc;
}

// T_V . grad u = sum_i T_{V_i} (d_i u).
inline GridFunction transport_paraproduct(const std::vector<GridFunction>& V,
                                          const GridFunction& u,
                                          const AdmissibleCutoff& cut = {}) {
    GridFunction acc = GridFunction::zero(u.grid());
    for (std::size_t i = 0; i < V.size(); ++i)
        acc += paraproduct_apply(V[i], u.derivative(int(i)), cut);
    return acc;
}

// div(T_V u) = sum_i d_i (T_{V_i} u).
inline GridFunction transport_divergence(const std::vector<GridFunction>& V,
                                         const GridFunction& u,
                                         const AdmissibleCutoff& cut = {}) {
    GridFunction acc = GridFunction::zero(u.grid());
    for (std::size_t i = 0; i < V.size(); ++i)
        acc += paraproduct_apply(V[i], u, cut).derivative(int(i));
    return acc;
}

struct LocalizedTransport {
    GridFunction main;
    GridFunction remainder;
};

// Frequency-localized commutator split of Lemma TV-S:
//   T_V . grad Delta_j u = S_j(V) . grad Delta_j u + R_j u,
// with the remainder spectrally supported in a ball of radius O(2^j).
inline LocalizedTransport localize_transport(const std::vector<GridFunction>& V,
                                             const GridFunction& u, int j,
                                             const AdmissibleCutoff& cut = {}) {
    if (j < 0) throw std::invalid_argument("localize_transport: j >= 0 required");
    spectral::DyadicPartition lp(u.grid());
    GridFunction dju = lp.delta(u, j);
    GridFunction main = GridFunction::zero(u.grid());
    for (std::size_t i = 0; i < V.size(); ++i)
        main += pointwise(lp.s_low(V[i], j), dju.derivative(int(i)));
    GridFunction full = transport_paraproduct(V, dju, cut);
    return {main, full - main};
}

// Commutator [T_a, Delta_j] u.
inline GridFunction paradiff_commutator(const Symbol& a, const GridFunction& u, int j,
                                        const AdmissibleCutoff& cut = {}) {
    spectral::DyadicPartition lp(u.grid());
    return paradiff_apply(a, lp.delta(u, j), cut) - lp.delta(paradiff_apply(a, u, cut), j);
}

// Precomputed sparse form of T_a for repeated application with a frozen
// symbol (the production path of the localized evolutions).  Entries are
// exactly those of paradiff_apply.
class ParaOperator {
  public:
    ParaOperator(const Symbol& a, const PeriodicGrid& g, const AdmissibleCutoff& cut = {})
        : grid_(g) {
        if (!(a.grid() == g)) throw std::invalid_argument("ParaOperator: grid mismatch");
        for (std::size_t ie = 0; ie < g.size(); ++ie) {
            Vec eta = g.freq(ie);
            double ne = spectral::norm(eta);
            double pl = cut.psi_low(ne);
            if (pl == 0.0) continue;
            std::vector<cplx> col_hat;
            cplx cval = 1.0;
            const std::vector<cplx>* ahat = nullptr;
            if (a.x_independent()) {
                entries_.push_back({ie, ie, a.eval({0.0, 0.0}, eta) * pl});
                continue;
            } else if (a.separable()) {
                cval = a.eval_g_factor(eta);
                ahat = &a.x_factor().spectrum();
            } else {
                col_hat = a.column(eta).spectrum();
                ahat = &col_hat;
            }
            for (const auto& th : detail::ball_freqs(g, cut.eps2 * ne)) {
                double nth = std::sqrt(double(th[0]) * th[0] + double(th[1]) * th[1]);
                double w = cut.chi(nth, ne);
                if (w == 0.0) continue;
                cplx av = (*ahat)[g.spec_index(th[0], th[1])] * cval;
                if (std::abs(av) < 1e-300) continue;
                std::size_t io = detail::shifted_index(g, eta, th);
                if (io == std::size_t(-1)) continue;
                entries_.push_back({io, ie, w * av * pl});
            }
        }
    }

    GridFunction apply(const GridFunction& u) const {
        std::vector<cplx> out(grid_.size(), cplx(0.0));
        const auto& spec = u.spectrum();
        for (const auto& e : entries_) out[e.row] += e.w * spec[e.col];
        return GridFunction::from_spectrum(grid_, std::move(out));
    }

  private:
    struct Entry {
        std::size_t row, col;
        cplx w;
    };
    PeriodicGrid grid_;
    std::vector<Entry> entries_;
};

}  // namespace parawave::paradiff
