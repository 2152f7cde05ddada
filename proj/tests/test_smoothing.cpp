#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "parawave/measure.hpp"
#include "parawave/smoothing.hpp"

using namespace parawave;
using namespace parawave::smoothing;
using paradiff::Symbol;
using spectral::GridFunction;
using spectral::PeriodicGrid;
using spectral::Vec;
using spectral::cplx;
using symmetrize::PrincipalSymbols;

static GridFunction constant(const PeriodicGrid& g, double c) {
    return GridFunction::sample(g, [c](Vec) { return cplx(c); });
}

// gamma-shaped symbol sqrt(a(x)) |xi|^{1/2} from a positive coefficient field
static Symbol gamma_like(const GridFunction& a_field) {
    std::vector<cplx> v(a_field.values().size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sqrt(a_field.values()[i].real());
    auto sq = GridFunction::from_values(a_field.grid(), std::move(v));
    return Symbol::separable(
        sq, [](Vec k) { return cplx(std::sqrt(spectral::norm(k))); }, 0.5, 0.5);
}

// Positive rough coefficient field built as an exact square, so that
// sqrt(a) = 1 + w/(2 sup) carries the Weierstrass roughness without
// composition artifacts.
static GridFunction rough_a(const PeriodicGrid& g, double exponent, int kmax,
                            std::uint64_t seed) {
    measure::WeierstrassRecipe rec;
    rec.exponent = exponent;
    rec.k_max = kmax;
    rec.seed = seed;
    auto w = measure::weierstrass(g, rec);
    double sup = w.sup_norm();
    std::vector<cplx> v(w.values().size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double root = 1.0 + 0.5 * w.values()[i].real() / sup;
        v[i] = root * root;
    }
    return GridFunction::from_values(g, std::move(v));
}

TEST_CASE("smoothing parameters") {
    SmoothingParams sp(6);
    CHECK(sp.h() == Catch::Approx(std::pow(2.0, -6)));
    CHECK(sp.h_tilde() * sp.h_tilde() == Catch::Approx(sp.h()));
    CHECK(SmoothingParams::delta == Catch::Approx(2.0 / 3.0));
}

TEST_CASE("x-independent symbols are fixed points of the smoothing") {
    PeriodicGrid g(1, 256);
    Symbol s = Symbol::multiplier(
        g, [](Vec k) { return cplx(std::sqrt(spectral::norm(k))); }, 0.5);
    SmoothedSymbol sm(s, SmoothingParams(4));
    Vec xi{1.0, 0.0};
    CHECK((sm.column(xi) - s.column(xi)).sup_norm() < 1e-14);
}

TEST_CASE("smoothing rejects cuts beyond the grid") {
    PeriodicGrid g(1, 32);
    Symbol s = gamma_like(constant(g, 1.0));
    CHECK_THROWS(SmoothedSymbol(s, SmoothingParams(9)));  // 2^6 = 64 > 16
}

TEST_CASE("smoothing error decays like h^{delta s0} on a C^{s0} base") {
    PeriodicGrid g(1, 4096);
    double s0 = 0.5;
    Symbol base = gamma_like(rough_a(g, s0, 10, 3));
    Vec xi{1.0, 0.0};
    std::vector<double> hs, errs;
    for (int j = 4; j <= 9; ++j) {
        SmoothedSymbol sm(base, SmoothingParams(j));
        hs.push_back(std::pow(2.0, -j));
        errs.push_back((sm.column(xi) - base.column(xi)).sup_norm());
    }
    auto fit = measure::fit_power_law(hs, errs);
    double predicted = SmoothingParams::delta * s0;
    CHECK(std::abs(fit.exponent - predicted) <= 0.15 * predicted);
}

TEST_CASE("derivative growth saturates the two lemma rates") {
    PeriodicGrid g(1, 4096);
    std::vector<int> js{4, 5, 6, 7, 8, 9};

    // essentially-L^inf bases (exponent 0.01): target -delta |alpha|
    std::vector<Symbol> rough0;
    for (std::uint64_t seed : {5u, 6u, 7u, 8u, 9u})
        rough0.push_back(gamma_like(rough_a(g, 0.01, 11, seed)));
    auto rows0 = derivative_growth_scan(rough0, 0.01, js, 3);
    for (const auto& r : rows0) {
        double target = -SmoothingParams::delta * (r.alpha[0]);
        CHECK(std::abs(r.fitted - target) <= 0.10 * std::abs(target));
    }

    // W^{1/2,inf} bases: target -delta (|alpha| - 1/2)
    std::vector<Symbol> rough12;
    for (std::uint64_t seed : {5u, 6u, 7u, 8u, 9u})
        rough12.push_back(gamma_like(rough_a(g, 0.5, 11, seed)));
    auto rows12 = derivative_growth_scan(rough12, 0.5, js, 3);
    for (const auto& r : rows12) {
        double target = -SmoothingParams::delta * (r.alpha[0] - 0.5);
        CHECK(std::abs(r.fitted - target) <= 0.10 * std::abs(target));
    }
}

TEST_CASE("field smoothing") {
    PeriodicGrid g(1, 256);
    SmoothingParams sp(4);

    auto c = constant(g, 0.3);
    CHECK((smooth_field(c, sp) - c).sup_norm() < 1e-14);

    auto cosx = GridFunction::sample(g, [](Vec x) { return cplx(std::cos(x[0])); });
    SmoothingParams sp2(2);  // cut 2^{4/3} >= 2 passes mode one untouched
    CHECK((smooth_field(cosx, sp2) - cosx).sup_norm() < 1e-14);

    // rough V at exponent 1: || S_j V - S_{j delta} V || ~ 2^{-j delta}
    measure::WeierstrassRecipe rec;
    rec.exponent = 1.0;
    rec.k_max = 11;
    rec.seed = 13;
    PeriodicGrid gl(1, 4096);
    auto V = measure::weierstrass(gl, rec);
    spectral::DyadicPartition lp(gl);
    std::vector<double> hs, diffs;
    for (int j = 4; j <= 9; ++j) {
        auto sj = lp.s_low(V, j);
        auto sjd = smooth_field(V, SmoothingParams(j));
        hs.push_back(std::pow(2.0, -j));
        diffs.push_back((sj - sjd).sup_norm());
    }
    auto fit = measure::fit_power_law(hs, diffs);
    CHECK(std::abs(fit.exponent - SmoothingParams::delta) <=
          0.15 * SmoothingParams::delta);
}

TEST_CASE("hessian closed form at the flat points") {
    PeriodicGrid g1(1, 32);
    PrincipalSymbols flat1(constant(g1, 1.0), {GridFunction::zero(g1)});
    auto pair1 = hessian_det(flat1, 0, {1.0, 0.0});
    CHECK(pair1.formula_value == Catch::Approx(0.25).epsilon(1e-12));
    CHECK(pair1.fd_value == Catch::Approx(0.25).epsilon(1e-7));

    PeriodicGrid g2(2, 8);
    PrincipalSymbols flat2(constant(g2, 1.0),
                           {GridFunction::zero(g2), GridFunction::zero(g2)});
    auto pair2 = hessian_det(flat2, 0, {1.0, 0.0});
    CHECK(pair2.formula_value == Catch::Approx(0.125).epsilon(1e-12));
    CHECK(pair2.fd_value == Catch::Approx(0.125).epsilon(1e-7));

    CHECK_THROWS(hessian_det(flat1, 0, {3.0, 0.0}));  // outside the annulus
}

TEST_CASE("hessian formula against finite differences on random states") {
    std::mt19937_64 rng(31);
    for (int draw = 0; draw < 25; ++draw) {
        for (int d : {1, 2}) {
            PeriodicGrid g(d, 16);
            auto a = constant(g, 1.0) + 0.3 * measure::random_hs_field(g, 3.0, 3.0, rng);
            std::vector<GridFunction> ge;
            for (int c = 0; c < d; ++c)
                ge.push_back(0.4 * measure::random_hs_field(g, 3.0, 3.0, rng));
            PrincipalSymbols ps(a.real_part(), ge);
            std::size_t idx = std::size_t(measure::uniform(rng, 0.0, double(g.size())));
            double r = measure::uniform(rng, 0.6, 1.9);
            double th = d == 1 ? 0.0 : measure::uniform(rng, 0.0, 2.0 * spectral::pi);
            Vec xi{r * std::cos(th), d == 1 ? 0.0 : r * std::sin(th)};
            auto pr = hessian_det(ps, idx, xi);
            CHECK(std::abs(pr.formula_value - pr.fd_value) <= 1e-6 * pr.formula_value);
        }
    }
}

TEST_CASE("perturbing alpha moves the |2 alpha - 1| factor") {
    PeriodicGrid g(1, 32);
    PrincipalSymbols flat(constant(g, 1.0), {GridFunction::zero(g)});
    double f14 = hessian_det_formula(flat, 0, {1.0, 0.0}, 0.25);
    double f13 = hessian_det_formula(flat, 0, {1.0, 0.0}, 1.0 / 3.0);
    CHECK(f14 == Catch::Approx(0.25));
    CHECK(f13 == Catch::Approx((2.0 / 3.0) * (1.0 / 3.0)));
}

TEST_CASE("rank-one determinant identity") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 1000; ++rep) {
        int d = 2 + int(rng() % 2);
        std::vector<double> w(std::size_t(d), 0.0);
        double nrm = 0.0;
        for (auto& c : w) {
            c = measure::uniform(rng, -1.0, 1.0);
            nrm += c * c;
        }
        nrm = std::sqrt(nrm);
        for (auto& c : w) c /= nrm;
        double lam = measure::uniform(rng, -0.9, 10.0);
        CHECK(std::abs(rank_one_det(lam, w) - (1.0 + lam)) <= 1e-12 * (1.0 + std::abs(lam)));
    }
}

TEST_CASE("smoothed hessian keeps the floor for small h") {
    PeriodicGrid g(1, 2048);
    Symbol base = gamma_like(rough_a(g, 0.5, 9, 23));
    GridFunction af = rough_a(g, 0.5, 9, 23);
    PrincipalSymbols ps(af, {GridFunction::zero(g)});
    Symbol base_ps = gamma_like(af);

    double h0 = 0.0;
    for (int j : {5, 6, 7, 8}) {
        SmoothedSymbol sm(base_ps, SmoothingParams(j));
        bool ok = true;
        for (double r : {0.6, 1.0, 1.5, 1.9}) {
            for (std::size_t idx = 0; idx < g.size(); idx += g.size() / 8) {
                auto pr = hessian_det(ps, sm, idx, {r, 0.0});
                if (pr.fd_value < 0.5 * pr.formula_value) ok = false;
            }
        }
        if (ok && h0 == 0.0) h0 = std::pow(2.0, -j);
    }
    INFO("largest h with the 0.5x floor: " << h0);
    // floor must hold at the smallest tested h
    SmoothedSymbol fine(base_ps, SmoothingParams(8));
    for (double r : {0.6, 1.0, 1.5, 1.9}) {
        auto pr = hessian_det(ps, fine, 0, {r, 0.0});
        CHECK(pr.fd_value >= 0.5 * pr.formula_value);
    }
}
