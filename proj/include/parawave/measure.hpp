#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "parawave/grid.hpp"

namespace parawave::measure {

using spectral::GridFunction;
using spectral::PeriodicGrid;
using spectral::Vec;
using spectral::cplx;

// A fitted power law y = exp(intercept) * x^exponent over a scan window.
struct DecayFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    bool low_confidence = false;
};

// Least squares on (log x, log y).
inline DecayFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y,
                              double r2_flag = 0.95) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_power_law: need >= 2 samples");
    std::size_t m = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("fit_power_law: samples must be positive");
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double n = double(m);
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double inter = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0, ybar = sy / n;
    for (std::size_t i = 0; i < m; ++i) {
        double ly = std::log(y[i]);
        double fitv = inter + slope * std::log(x[i]);
        ss_res += (ly - fitv) * (ly - fitv);
        ss_tot += (ly - ybar) * (ly - ybar);
    }
    DecayFit f;
    f.exponent = slope;
    f.intercept = inter;
    f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    f.window_lo = x.front();
    f.window_hi = x.back();
    f.low_confidence = f.r2 < r2_flag;
    return f;
}

// Slope fit against j for quantities expected to scale like 2^{slope * j};
// the returned exponent is that slope.
inline DecayFit fit_dyadic_slope(const std::vector<int>& js, const std::vector<double>& vals) {
    std::vector<double> x(js.size());
    for (std::size_t i = 0; i < js.size(); ++i) x[i] = std::pow(2.0, js[i]);
    return fit_power_law(x, vals);
}

// Deterministic uniform in [0,1) from the engine's raw 64-bit output;
// avoids the library-defined distribution so streams are reproducible.
inline double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Weierstrass-type lacunary sum  sum_m k_m^{-r} cos(k_m x + theta_m)  with
// geometric frequencies k_m ~ ratio^m up to 2^{k_max}; it lies in C^r and in
// no better Hoelder class.  ratio = 2 is the classical dyadic sum; smaller
// ratios pack the blocks densely, which makes sup-norm scans scale smoothly
// in the cutoff.
struct WeierstrassRecipe {
    double exponent = 0.5;
    int k_min = 0;            // lowest dyadic level
    int k_max = 10;           // frequencies up to 2^{k_max}
    std::uint64_t seed = 1;
    double amplitude = 1.0;
    double ratio = 2.0;
};

inline GridFunction weierstrass(const PeriodicGrid& g, const WeierstrassRecipe& rec) {
    std::mt19937_64 rng(rec.seed);
    std::vector<long> freqs;
    double top = std::pow(2.0, rec.k_max);
    for (double f = std::pow(2.0, rec.k_min); f <= top + 0.5; f *= rec.ratio) {
        long k = std::lround(f);
        if (freqs.empty() || k > freqs.back()) freqs.push_back(k);
    }
    std::vector<double> phase0, phase1;
    for (std::size_t m = 0; m < freqs.size(); ++m) {
        phase0.push_back(uniform(rng, 0.0, 2.0 * spectral::pi));
        phase1.push_back(uniform(rng, 0.0, 2.0 * spectral::pi));
    }
    return GridFunction::sample(g, [&](Vec x) {
        double acc = 0.0;
        for (std::size_t m = 0; m < freqs.size(); ++m) {
            double w = double(freqs[m]);
            double amp = std::pow(w, -rec.exponent);
            double term = std::cos(w * x[0] + phase0[m]);
            if (g.dim == 2) term += std::cos(w * x[1] + phase1[m]);
            acc += amp * term;
        }
        return cplx(rec.amplitude * acc);
    });
}

// Random band-limited real field with H^s-flat spectral density; used by the
// operator-norm probes.
inline GridFunction random_hs_field(const PeriodicGrid& g, double s, double kmax,
                                    std::mt19937_64& rng) {
    std::vector<cplx> spec(g.size(), cplx(0.0));
    for (std::size_t i = 0; i < spec.size(); ++i) {
        Vec k = g.freq(i);
        double r = spectral::norm(k);
        if (r < 0.5 || r > kmax) continue;
        double amp = std::pow(1.0 + r * r, -s / 2.0) * std::pow(r, -(g.dim - 1) * 0.5);
        double ph = uniform(rng, 0.0, 2.0 * spectral::pi);
        spec[i] = amp * cplx(std::cos(ph), std::sin(ph));
    }
    // Hermitian symmetrization keeps the sample real-valued.
    std::vector<cplx> sym(g.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
        Vec k = g.freq(i);
        std::size_t j = g.spec_index(-int(k[0]), -int(k[1]));
        sym[i] = 0.5 * (spec[i] + std::conj(spec[j]));
    }
    return GridFunction::from_spectrum(g, std::move(sym));
}

}  // namespace parawave::measure
