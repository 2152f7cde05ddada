#pragma once

#include <cmath>

#include "parawave/grid.hpp"

namespace parawave::cutoffs {

using spectral::Vec;

// C-infinity step built from the exp(-1/t) mollifier: 0 for t<=0, 1 for t>=1.
inline double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = std::exp(-1.0 / t);
    double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

// Radial low-pass profile: 1 for r <= lo, 0 for r >= hi.
inline double ramp_down(double r, double lo, double hi) {
    return 1.0 - smooth_step((r - lo) / (hi - lo));
}
// 0 for r <= lo, 1 for r >= hi.
inline double ramp_up(double r, double lo, double hi) {
    return smooth_step((r - lo) / (hi - lo));
}

// Littlewood-Paley low-pass psi: psi = 1 for |xi| <= 1/2, 0 for |xi| >= 1.
inline double lp_psi(double r) { return ramp_down(r, 0.5, 1.0); }
// Annular bump phi(xi) = psi(xi/2) - psi(xi), supported in 1/2 <= |xi| <= 2.
inline double lp_phi(double r) { return lp_psi(r / 2.0) - lp_psi(r); }

// Low-frequency cutoff of the paradifferential quantization:
// 0 for |eta| <= lo, 1 for |eta| >= hi.  Defaults follow cond.psi.
struct PsiLow {
    double lo = 1.0;
    double hi = 2.0;
    double operator()(const Vec& eta) const { return ramp_up(spectral::norm(eta), lo, hi); }
    double operator()(double r) const { return ramp_up(r, lo, hi); }
};

// Admissible cutoff chi(theta,eta): homogeneous of degree zero, even in
// theta, equal to 1 for |theta| <= eps1|eta| and 0 for |theta| >= eps2|eta|.
struct AdmissibleCutoff {
    double eps1 = 0.1;
    double eps2 = 0.3;
    PsiLow psi_low{};

    AdmissibleCutoff() = default;
    AdmissibleCutoff(double e1, double e2, PsiLow pl = {}) : eps1(e1), eps2(e2), psi_low(pl) {
        if (!(0.0 < eps1 && eps1 < eps2 && eps2 < 0.5))
            throw std::invalid_argument("cutoff: need 0 < eps1 < eps2 < 1/2");
    }

    double chi(const Vec& theta, const Vec& eta) const {
        double ne = spectral::norm(eta);
        if (ne == 0.0) return 0.0;
        return ramp_down(spectral::norm(theta) / ne, eps1, eps2);
    }
    double chi(double ntheta, double neta) const {
        if (neta == 0.0) return 0.0;
        return ramp_down(ntheta / neta, eps1, eps2);
    }
};

// Microlocal window of the semiclassical reduction: supported in
// {1/4 <= |xi| <= 4}, equal to 1 on {1/3 <= |xi| <= 3}.
inline double phi1(double r) { return ramp_up(r, 0.25, 1.0 / 3.0) * ramp_down(r, 3.0, 4.0); }
inline double phi1(const Vec& xi) { return phi1(spectral::norm(xi)); }

// Amplitude localization bump of the parametrix: 1 on |t| <= 1, 0 on |t| >= 2.
inline double bump_psi0(double t) { return ramp_down(std::abs(t), 1.0, 2.0); }
inline double bump_psi0(const Vec& v) { return bump_psi0(spectral::norm(v)); }

// Interval-gluing window: supported in (0,2), equal to 1 on [1/2, 3/2].
inline double glue_chi(double t) {
    return ramp_up(t, 0.0, 0.5) * ramp_down(t, 1.5, 2.0);
}

// Spectral cutoff carried by parametrix data: supported in {1/2<=|xi|<=2},
// equal to 1 on the middle of the annulus.
inline double amp_chi(double r) { return ramp_up(r, 0.5, 0.65) * ramp_down(r, 1.6, 2.0); }
inline double amp_chi(const Vec& xi) { return amp_chi(spectral::norm(xi)); }
// Outer cutoff, identically 1 on supp(amp_chi).
inline double amp_chi1(double r) { return ramp_up(r, 0.4, 0.5) * ramp_down(r, 2.0, 2.5); }
inline double amp_chi1(const Vec& xi) { return amp_chi1(spectral::norm(xi)); }

}  // namespace parawave::cutoffs
