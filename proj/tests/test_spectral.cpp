#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "parawave/dyadic.hpp"
#include "parawave/grid.hpp"
#include "parawave/io.hpp"
#include "parawave/measure.hpp"

using namespace parawave;
using spectral::GridFunction;
using spectral::PeriodicGrid;
using spectral::Vec;
using spectral::cplx;

TEST_CASE("grid invariants") {
    CHECK_THROWS(PeriodicGrid(3, 64));
    CHECK_THROWS(PeriodicGrid(1, 4));
    CHECK_THROWS(PeriodicGrid(1, 100));
    PeriodicGrid g(2, 16);
    CHECK(g.size() == 256);
    CHECK(g.freq(g.spec_index(-8, 7))[0] == -8.0);
    CHECK(g.freq(g.spec_index(-8, 7))[1] == 7.0);
}

TEST_CASE("transform round trip and hermitian spectra") {
    PeriodicGrid g(1, 64);
    std::mt19937_64 rng(7);
    std::vector<cplx> v(g.size());
    for (auto& c : v) c = cplx(measure::uniform(rng, -1, 1), 0.0);
    auto f = GridFunction::from_values(g, v);
    auto back = GridFunction::from_spectrum(g, f.spectrum());
    double err = 0;
    for (std::size_t i = 0; i < v.size(); ++i) err = std::max(err, std::abs(back.values()[i] - v[i]));
    CHECK(err <= 1e-12 * f.sup_norm());
    // real field => hermitian spectrum
    double herm = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        Vec k = g.freq(i);
        if (int(k[0]) == -g.nyquist()) continue;
        auto j = g.spec_index(-int(k[0]));
        herm = std::max(herm, std::abs(f.spectrum()[i] - std::conj(f.spectrum()[j])));
    }
    CHECK(herm < 1e-14);
}

TEST_CASE("apply_multiplier examples") {
    PeriodicGrid g(1, 64);
    auto u = GridFunction::sample(g, [](Vec x) { return cplx(std::cos(3 * x[0])); });
    // identity
    auto same = u.apply_multiplier([](Vec) { return cplx(1.0); });
    CHECK((same - u).sup_norm() < 1e-14);
    // |xi| on a single mode
    auto Du = u.apply_multiplier([](Vec k) { return cplx(spectral::norm(k)); });
    auto expect = GridFunction::sample(g, [](Vec x) { return cplx(3.0 * std::cos(3 * x[0])); });
    CHECK((Du - expect).sup_norm() < 1e-12);
    // inverse pair <xi>^s, <xi>^{-s}
    auto fwd = u.apply_multiplier([](Vec k) { return cplx(std::pow(1 + spectral::dot(k, k), 0.6)); });
    auto back = fwd.apply_multiplier([](Vec k) { return cplx(std::pow(1 + spectral::dot(k, k), -0.6)); });
    CHECK((back - u).sup_norm() < 1e-12);
    // non-finite multiplier rejected
    CHECK_THROWS(u.apply_multiplier([](Vec k) { return cplx(1.0 / spectral::norm(k)); }));
}

TEST_CASE("sobolev norm") {
    PeriodicGrid g(1, 64);
    CHECK(GridFunction::zero(g).sobolev(1.3) == 0.0);
    auto u = GridFunction::sample(g, [](Vec x) { return std::exp(cplx(0, 3 * x[0])); });
    CHECK(u.sobolev(1.0) == Catch::Approx(std::sqrt(10.0)).epsilon(1e-13));
    std::mt19937_64 rng(3);
    auto w = measure::random_hs_field(g, 1.0, 20.0, rng);
    CHECK(w.sobolev(0.0) == Catch::Approx(w.l2()).epsilon(1e-12));
}

TEST_CASE("dyadic blocks") {
    PeriodicGrid g(1, 256);
    spectral::DyadicPartition lp(g);

    // telescoping identity on the lattice
    double tel = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double r = spectral::norm(g.freq(i));
        double acc = spectral::DyadicPartition::psi(r);
        int N = 12;
        for (int k = 0; k < N; ++k) acc += spectral::DyadicPartition::phi(std::pow(2.0, -k) * r);
        tel = std::max(tel, std::abs(acc - spectral::DyadicPartition::psi(std::pow(2.0, -N) * r)));
    }
    CHECK(tel < 1e-12);

    // single mode through an annulus: weight is phi evaluated at |xi|/2^j
    auto u = GridFunction::sample(g, [](Vec x) { return std::exp(cplx(0, 4 * x[0])); });
    auto d2 = lp.delta(u, 2);
    double w = spectral::DyadicPartition::phi(4.0 / 4.0);
    CHECK((d2 - w * u).sup_norm() < 1e-13);

    // partition of unity
    std::mt19937_64 rng(11);
    auto f = measure::random_hs_field(g, 0.5, 100.0, rng);
    CHECK(spectral::partition_residual(f) <= 1e-10 * std::max(1.0, f.sup_norm()));

    // full-band low-pass reproduces u
    CHECK((lp.s_low(f, 10) - f).sup_norm() < 1e-12);

    // almost orthogonality on the lattice
    for (int k = 0; k <= lp.j_max(); ++k)
        for (int j = 0; j <= lp.j_max(); ++j)
            if (std::abs(k - j) >= 2) CHECK(lp.delta(lp.delta(f, j), k).sup_norm() < 1e-13);

    CHECK_THROWS(lp.delta(f, lp.j_max() + 1));
}

TEST_CASE("dyadic holder norm") {
    PeriodicGrid g(1, 512);
    auto c = GridFunction::sample(g, [](Vec) { return cplx(0.7); });
    CHECK(spectral::dyadic_holder_norm(c, 0.5) == Catch::Approx(0.7).epsilon(1e-12));
    CHECK_THROWS(spectral::dyadic_holder_norm(c, 1.0));

    // single high block: norm ~ 2^{5r} * phi-weight at the block
    auto u = GridFunction::sample(g, [](Vec x) { return cplx(std::cos(32 * x[0])); });
    double got = spectral::dyadic_holder_norm(u, 0.5);
    double expect = std::pow(2.0, 2.5) * spectral::DyadicPartition::phi(1.0);
    CHECK(got == Catch::Approx(expect).margin(0.05 * expect));

    // Weierstrass at exponent 1/2: r=0.75 norm diverges ~ 2^{j/4} with the cutoff
    double prev = 0.0;
    for (int kmax = 4; kmax <= 7; ++kmax) {
        measure::WeierstrassRecipe rec;
        rec.exponent = 0.5;
        rec.k_max = kmax;
        rec.seed = 5;
        auto wfun = measure::weierstrass(g, rec);
        double n075 = spectral::dyadic_holder_norm(wfun, 0.75);
        double n05 = spectral::dyadic_holder_norm(wfun, 0.45);
        if (kmax > 4) CHECK(n075 > prev * 1.1);  // diverging in the cutoff
        CHECK(n05 < 30.0);                       // bounded below the regularity
        prev = n075;
    }
}

TEST_CASE("bernstein constant stable") {
    PeriodicGrid g(1, 1024);
    std::mt19937_64 rng(23);
    std::vector<double> consts;
    for (int j = 4; j <= 8; ++j) {
        double worst = 0;
        for (int rep = 0; rep < 5; ++rep) {
            auto u = measure::random_hs_field(g, 0.0, std::pow(2.0, j), rng);
            double c = u.derivative(0).sup_norm() / (std::pow(2.0, j) * u.sup_norm());
            worst = std::max(worst, c);
        }
        consts.push_back(worst);
    }
    double lo = *std::min_element(consts.begin(), consts.end());
    double hi = *std::max_element(consts.begin(), consts.end());
    CHECK(hi / lo < 1.5);  // stable within +-20% around the mean
}

TEST_CASE("binary container round trip") {
    PeriodicGrid g(2, 16);
    std::mt19937_64 rng(9);
    auto f = measure::random_hs_field(g, 0.3, 6.0, rng);
    io::write_pwgf("roundtrip.pwgf", f);
    auto back = io::read_pwgf("roundtrip.pwgf");
    CHECK((back - f).sup_norm() == 0.0);
    std::remove("roundtrip.pwgf");
}
