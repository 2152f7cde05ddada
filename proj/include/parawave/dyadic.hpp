#pragma once

#include <cmath>
#include <stdexcept>

#include "parawave/cutoffs.hpp"
#include "parawave/grid.hpp"

namespace parawave::spectral {

// Littlewood-Paley decomposition on the frequency lattice.  The profiles are
// built so that psi(xi) + sum_{k=0}^{N-1} phi(2^{-k} xi) = psi(2^{-N} xi)
// holds pointwise by construction (phi(xi) = psi(xi/2) - psi(xi)).
struct DyadicPartition {
    PeriodicGrid grid;

    explicit DyadicPartition(const PeriodicGrid& g) : grid(g) {}

    static double psi(double r) { return cutoffs::lp_psi(r); }
    static double phi(double r) { return cutoffs::lp_phi(r); }

    // Largest j whose annulus {2^{j-1} <= |xi| <= 2^{j+1}} still meets the
    // per-axis Nyquist ball; above it every block vanishes on the lattice.
    int j_max() const {
        double rmax = grid.nyquist() * std::sqrt(double(grid.dim));
        int j = 0;
        while (std::pow(2.0, j) <= rmax) ++j;
        return j;  // 2^{j_max - 1} <= rmax < 2^{j_max}
    }

    enum class Kind { delta, s_low };

    GridFunction block(const GridFunction& u, int j, Kind kind) const {
        if (&u.grid() == nullptr || !(u.grid() == grid))
            throw std::invalid_argument("dyadic_block: grid mismatch");
        if (kind == Kind::delta) {
            if (j < -1) throw std::invalid_argument("dyadic_block: j < -1");
            if (j > j_max()) throw std::invalid_argument("dyadic_block: annulus beyond Nyquist");
            if (j == -1)
                return u.apply_multiplier([](Vec k) { return cplx(psi(norm(k))); });
            double scale = std::pow(2.0, -j);
            return u.apply_multiplier(
                [scale](Vec k) { return cplx(phi(scale * norm(k))); });
        }
        if (j < 0) throw std::invalid_argument("dyadic_block: s_low needs j >= 0");
        double scale = std::pow(2.0, -j);
        return u.apply_multiplier([scale](Vec k) { return cplx(psi(scale * norm(k))); });
    }

    GridFunction delta(const GridFunction& u, int j) const { return block(u, j, Kind::delta); }
    GridFunction s_low(const GridFunction& u, int j) const { return block(u, j, Kind::s_low); }

    // Low-pass at an arbitrary (non-dyadic) cut: psi(xi/cut * 1/2)... we keep
    // the profile shape psi(xi * s) with s chosen so the pass band is
    // {|xi| <= cut/2} and the stop band {|xi| >= cut}.
    GridFunction lowpass(const GridFunction& u, double cut) const {
        return u.apply_multiplier([cut](Vec k) { return cplx(psi(norm(k) / cut)); });
    }
};

// Zygmund-style Besov norm: ||D_{-1}u||_inf + max_j 2^{jr} ||D_j u||_inf.
// Equivalent to the W^{r,inf} norm for non-integer r only; integer r is
// rejected.
inline double dyadic_holder_norm(const GridFunction& u, double r) {
    if (r <= 0.0 || r == std::floor(r))
        throw std::invalid_argument("dyadic_holder_norm: r must be positive and non-integer");
    DyadicPartition lp(u.grid());
    double acc = lp.delta(u, -1).sup_norm();
    double peak = 0.0;
    for (int j = 0; j <= lp.j_max(); ++j)
        peak = std::max(peak, std::pow(2.0, j * r) * lp.delta(u, j).sup_norm());
    return acc + peak;
}

// Residual of the telescoping partition of unity, evaluated on the lattice.
inline double partition_residual(const GridFunction& u) {
    DyadicPartition lp(u.grid());
    GridFunction acc = lp.delta(u, -1);
    for (int j = 0; j <= lp.j_max(); ++j) acc += lp.delta(u, j);
    return (u - acc).sup_norm();
}

}  // namespace parawave::spectral
