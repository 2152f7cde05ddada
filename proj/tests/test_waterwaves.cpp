#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "parawave/laplace_oracle.hpp"
#include "parawave/measure.hpp"
#include "parawave/waterwaves.hpp"

using namespace parawave;
using namespace parawave::waterwaves;
using spectral::GridFunction;
using spectral::PeriodicGrid;
using spectral::Vec;
using spectral::cplx;

static GridFunction mode(const PeriodicGrid& g, int k, double amp, bool sine = false) {
    return GridFunction::sample(g, [=](Vec x) {
        return cplx(amp * (sine ? std::sin(k * x[0]) : std::cos(k * x[0])));
    });
}

TEST_CASE("flat-surface DN is the exact multiplier") {
    PeriodicGrid g(1, 128);
    FluidParams inf_p;
    auto zero = GridFunction::zero(g);
    auto f = mode(g, 5, 1.0);
    auto out = dn_apply(zero, f, inf_p);
    CHECK((out - 5.0 * f).sup_norm() < 1e-12);

    FluidParams fin;
    fin.depth = 0.8;
    auto outf = dn_apply(zero, f, fin);
    CHECK((outf - (5.0 * std::tanh(0.8 * 5.0)) * f).sup_norm() < 1e-12);

    FluidParams bad;
    bad.dn_order = 5;
    CHECK_THROWS(dn_apply(zero, f, bad));
}

TEST_CASE("DN expansion against the finite-difference strip oracle") {
    PeriodicGrid g(1, 256);
    FluidParams p;
    p.depth = 1.0;
    p.dn_order = 2;
    auto eta = mode(g, 1, 0.01);
    auto f = mode(g, 2, 1.0);
    auto expansion = dn_apply(eta, f, p);
    auto oracle = laplace_dn_oracle(eta, f, p.depth, 256, true);
    double scale = expansion.sup_norm();
    double worst = 0.0;
    for (std::size_t i = 0; i < oracle.values.size(); ++i) {
        double e = expansion.values()[i * std::size_t(oracle.stride)].real();
        worst = std::max(worst, std::abs(e - oracle.values[i]) / scale);
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("DN is self-adjoint order by order") {
    PeriodicGrid g(1, 128);
    FluidParams p;
    p.dn_order = 3;
    std::mt19937_64 rng(3);
    auto eta = 0.05 * measure::random_hs_field(g, 2.5, 6.0, rng);
    auto f = measure::random_hs_field(g, 1.5, 10.0, rng);
    auto h = measure::random_hs_field(g, 1.5, 10.0, rng);
    double a = spectral::inner_integral(f, dn_apply(eta, h, p)).real();
    double b = spectral::inner_integral(dn_apply(eta, f, p), h).real();
    CHECK(std::abs(a - b) <= 1e-9 * std::max(std::abs(a), 1.0));
}

TEST_CASE("traces at rest and on a flat free surface") {
    PeriodicGrid g(1, 64);
    FluidParams p;
    WaveState rest{GridFunction::zero(g), GridFunction::zero(g), 0.0};
    auto tf = traces_and_taylor(rest, p);
    CHECK(tf.B.sup_norm() < 1e-13);
    CHECK(tf.V[0].sup_norm() < 1e-13);
    CHECK((tf.a - GridFunction::sample(g, [&](Vec) { return cplx(p.gravity); })).sup_norm() <
          1e-10);

    // eta = 0, psi = cos(kx): B = |k| cos(kx), V = -k sin(kx)
    WaveState w{GridFunction::zero(g), mode(g, 3, 1.0), 0.0};
    auto tf2 = traces_and_taylor(w, p);
    CHECK((tf2.B - mode(g, 3, 3.0)).sup_norm() < 1e-10);
    CHECK((tf2.V[0] - mode(g, 3, -3.0, true)).sup_norm() < 1e-10);
}

TEST_CASE("taylor coefficient of a small linear wave stays near g") {
    PeriodicGrid g(1, 64);
    FluidParams p;
    p.dn_order = 3;
    double eps = 1e-3;
    WaveState w{mode(g, 1, eps), GridFunction::zero(g), 0.0};
    auto tf = traces_and_taylor(w, p);
    double dev = 0.0;
    for (const auto& v : tf.a.values()) dev = std::max(dev, std::abs(v.real() - p.gravity));
    CHECK(dev <= 10.0 * eps * p.gravity);
    CHECK(tf.min_a >= 0.9 * p.gravity);
    CHECK(tf.taylor_sign_ok);
}

TEST_CASE("rest state is a fixed point of the step") {
    PeriodicGrid g(1, 64);
    FluidParams p;
    WaveState rest{GridFunction::zero(g), GridFunction::zero(g), 0.0};
    auto next = csz_step(rest, p, 0.01);
    CHECK(next.eta.sup_norm() < 1e-14);
    CHECK(next.psi.sup_norm() < 1e-14);
    CHECK_THROWS(csz_step(rest, p, 1e3));  // beyond the dispersion cap
}

TEST_CASE("linear dispersion relation from the evolution") {
    PeriodicGrid g(1, 64);
    FluidParams p;
    p.dn_order = 2;
    const int k = 4;
    const double eps = 1e-4;
    WaveState w{mode(g, k, eps), GridFunction::zero(g), 0.0};
    double omega = std::sqrt(p.gravity * k);
    double T = 10.0 * 2.0 * spectral::pi / omega;
    double dt = 0.02;
    int steps = int(T / dt);

    std::vector<double> t_cross;
    double prev = w.eta.spectrum()[w.eta.grid().spec_index(k)].real();
    double tprev = 0.0;
    for (int s = 1; s <= steps; ++s) {
        w = csz_step(w, p, dt);
        double cur = w.eta.spectrum()[w.eta.grid().spec_index(k)].real();
        if ((prev > 0) != (cur > 0)) {
            double frac = prev / (prev - cur);
            t_cross.push_back(tprev + frac * dt);
        }
        prev = cur;
        tprev = w.t;
    }
    REQUIRE(t_cross.size() >= 10);
    // crossing times are (pi/2 + m pi)/omega: regress index against time
    double n = double(t_cross.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t m = 0; m < t_cross.size(); ++m) {
        sx += double(m);
        sy += t_cross[m];
        sxx += double(m) * m;
        sxy += double(m) * t_cross[m];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double omega_fit = spectral::pi / slope;
    CHECK(std::abs(omega_fit - omega) / omega < 1e-3);
}

TEST_CASE("energy at rest and for a flat-surface mode") {
    PeriodicGrid g(1, 64);
    FluidParams p;
    WaveState rest{GridFunction::zero(g), GridFunction::zero(g), 0.0};
    CHECK(energy(rest, p) == 0.0);
    WaveState w{GridFunction::zero(g), mode(g, 1, 1.0), 0.0};
    CHECK(energy(w, p) == Catch::Approx(spectral::pi / 2.0).epsilon(1e-12));
}

TEST_CASE("energy conservation over one hundred steps") {
    PeriodicGrid g(1, 64);
    FluidParams p;
    p.dn_order = 3;
    WaveState w{mode(g, 1, 1e-3), GridFunction::zero(g), 0.0};
    double e0 = energy(w, p);
    for (int s = 0; s < 100; ++s) w = csz_step(w, p, 0.03);
    double e1 = energy(w, p);
    CHECK(std::abs(e1 - e0) / e0 <= 1e-8);
}

TEST_CASE("one step forward and one step back returns the state") {
    PeriodicGrid g(1, 64);
    FluidParams p;
    p.dn_order = 2;
    WaveState w{mode(g, 2, 5e-3), mode(g, 1, 3e-3), 0.0};
    auto fwd = csz_step(w, p, 0.02);
    auto back = csz_step(fwd, p, -0.02);
    CHECK((back.eta - w.eta).sup_norm() <= 1e-10);
    CHECK((back.psi - w.psi).sup_norm() <= 1e-10);
}

TEST_CASE("dyadic scaling transform") {
    PeriodicGrid g(1, 128);
    FluidParams p;
    p.dn_order = 3;
    WaveState w{mode(g, 2, 2e-3), mode(g, 2, 1e-3, true), 0.0};

    // identity at lambda = 1
    auto same = scaling_transform(w, 1.0);
    CHECK((same.eta - w.eta).sup_norm() < 1e-15);

    CHECK_THROWS(scaling_transform(w, 3.0));

    // energy rescales by lambda^{-2} on the fixed torus
    double lam = 2.0;
    auto sc = scaling_transform(w, lam);
    CHECK(energy(sc, p) == Catch::Approx(energy(w, p) / (lam * lam)).epsilon(1e-10));

    // evolve-then-scale against scale-then-evolve (time sqrt(lambda) dt)
    double dt = 0.01;
    WaveState a = w;
    for (int s = 0; s < 4; ++s) a = csz_step(a, p, std::sqrt(lam) * dt);
    a = scaling_transform(a, lam);
    WaveState b = scaling_transform(w, lam);
    for (int s = 0; s < 4; ++s) b = csz_step(b, p, dt);
    CHECK((a.eta - b.eta).sup_norm() <= 1e-6 * std::max(w.eta.sup_norm(), b.eta.sup_norm()));
    CHECK((a.psi - b.psi).sup_norm() <= 1e-6 * std::max(w.psi.sup_norm(), b.psi.sup_norm()));
}

TEST_CASE("strip condition guards finite depth") {
    PeriodicGrid g(1, 64);
    FluidParams p;
    p.depth = 0.05;
    WaveState deep{mode(g, 1, 0.04), GridFunction::zero(g), 0.0};
    CHECK_THROWS(dn_apply(deep.eta, deep.psi, p));
}
