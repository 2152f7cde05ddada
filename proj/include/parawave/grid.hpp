#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "parawave/fft.hpp"

namespace parawave::spectral {

using cplx = std::complex<double>;
inline constexpr double pi = 3.141592653589793238462643383279502884;

// A point or frequency vector; component [1] is ignored in dimension one.
using Vec = std::array<double, 2>;

inline double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec& v) { return std::sqrt(dot(v, v)); }
inline Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec operator*(double s, const Vec& a) { return {s * a[0], s * a[1]}; }

// Discretization of R^d by the torus [0,2pi)^d with integer frequencies.
struct PeriodicGrid {
    int dim = 1;
    int n = 8;  // points per axis, power of two

    PeriodicGrid() = default;
    PeriodicGrid(int dim_, int n_) : dim(dim_), n(n_) {
        if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
        if (n < 8 || (n & (n - 1)) != 0)
            throw std::invalid_argument("grid: points_per_axis must be a power of two >= 8");
    }

    std::size_t size() const { return dim == 1 ? std::size_t(n) : std::size_t(n) * n; }
    int nyquist() const { return n / 2; }
    double spacing() const { return 2.0 * pi / n; }

    int freq1(int i) const { return i < n / 2 ? i : i - n; }

    Vec freq(std::size_t flat) const {
        if (dim == 1) return {double(freq1(int(flat))), 0.0};
        return {double(freq1(int(flat) / n)), double(freq1(int(flat) % n))};
    }
    Vec point(std::size_t flat) const {
        if (dim == 1) return {spacing() * double(flat), 0.0};
        return {spacing() * double(int(flat) / n), spacing() * double(int(flat) % n)};
    }
    // Flat index of the spectral slot holding integer frequency k.
    std::size_t spec_index(int k0, int k1 = 0) const {
        auto wrap = [this](int k) { return ((k % n) + n) % n; };
        if (dim == 1) return std::size_t(wrap(k0));
        return std::size_t(wrap(k0)) * n + wrap(k1);
    }

    bool operator==(const PeriodicGrid& o) const { return dim == o.dim && n == o.n; }
};

// A field sampled on a periodic grid with dual spectral access.  Both
// representations are kept; instances are immutable after construction, so
// they can be shared freely across workers.
class GridFunction {
  public:
    GridFunction() = default;

    static GridFunction from_values(const PeriodicGrid& g, std::vector<cplx> vals) {
        check_size(g, vals.size());
        GridFunction f;
        f.grid_ = g;
        f.vals_ = std::move(vals);
        f.spec_ = f.vals_;
        fft::forward(g.dim, g.n, f.spec_);
        return f;
    }
    static GridFunction from_spectrum(const PeriodicGrid& g, std::vector<cplx> spec) {
        check_size(g, spec.size());
        GridFunction f;
        f.grid_ = g;
        f.spec_ = std::move(spec);
        f.vals_ = f.spec_;
        fft::inverse(g.dim, g.n, f.vals_);
        return f;
    }
    static GridFunction zero(const PeriodicGrid& g) {
        GridFunction f;
        f.grid_ = g;
        f.vals_.assign(g.size(), cplx(0.0));
        f.spec_.assign(g.size(), cplx(0.0));
        return f;
    }
    static GridFunction sample(const PeriodicGrid& g, const std::function<cplx(Vec)>& fn) {
        std::vector<cplx> v(g.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(g.point(i));
        return from_values(g, std::move(v));
    }

    const PeriodicGrid& grid() const { return grid_; }
    const std::vector<cplx>& values() const { return vals_; }
    const std::vector<cplx>& spectrum() const { return spec_; }

    // Result spectrum is m(xi) * spectrum entrywise; rejects non-finite m.
    GridFunction apply_multiplier(const std::function<cplx(Vec)>& m) const {
        std::vector<cplx> s(spec_.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            cplx w = m(grid_.freq(i));
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
                throw std::invalid_argument("apply_multiplier: non-finite multiplier value");
            s[i] = w * spec_[i];
        }
        return from_spectrum(grid_, std::move(s));
    }

    GridFunction derivative(int axis) const {
        return apply_multiplier([axis](Vec k) { return cplx(0.0, k[axis]); });
    }
    std::vector<GridFunction> gradient() const {
        std::vector<GridFunction> g;
        for (int a = 0; a < grid_.dim; ++a) g.push_back(derivative(a));
        return g;
    }

    double sup_norm() const {
        double m = 0.0;
        for (const auto& v : vals_) m = std::max(m, std::abs(v));
        return m;
    }
    // l2-sum of <xi>^{2s}|u^(xi)|^2, square-rooted.  With this Parseval
    // normalization sobolev(0) equals the RMS of the samples.
    double sobolev(double s) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < spec_.size(); ++i) {
            Vec k = grid_.freq(i);
            double w = std::pow(1.0 + dot(k, k), s);
            acc += w * std::norm(spec_[i]);
        }
        return std::sqrt(acc);
    }
    double l2() const { return sobolev(0.0); }
    double max_imag() const {
        double m = 0.0;
        for (const auto& v : vals_) m = std::max(m, std::abs(v.imag()));
        return m;
    }
    // Largest |xi| with a spectral coefficient above the threshold.
    double spectral_radius(double tol = 1e-13) const {
        double peak = 0.0;
        for (const auto& c : spec_) peak = std::max(peak, std::abs(c));
        double r = 0.0;
        if (peak == 0.0) return 0.0;
        for (std::size_t i = 0; i < spec_.size(); ++i)
            if (std::abs(spec_[i]) > tol * peak) r = std::max(r, norm(grid_.freq(i)));
        return r;
    }

    GridFunction real_part() const {
        std::vector<cplx> v(vals_.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = vals_[i].real();
        return from_values(grid_, std::move(v));
    }

    GridFunction& operator+=(const GridFunction& o) { return *this = *this + o; }
    friend GridFunction operator+(const GridFunction& a, const GridFunction& b) {
        return zip(a, b, [](cplx x, cplx y) { return x + y; });
    }
    friend GridFunction operator-(const GridFunction& a, const GridFunction& b) {
        return zip(a, b, [](cplx x, cplx y) { return x - y; });
    }
    friend GridFunction operator*(cplx s, const GridFunction& a) {
        GridFunction f;
        f.grid_ = a.grid_;
        f.vals_.resize(a.vals_.size());
        f.spec_.resize(a.spec_.size());
        for (std::size_t i = 0; i < a.vals_.size(); ++i) {
            f.vals_[i] = s * a.vals_[i];
            f.spec_[i] = s * a.spec_[i];
        }
        return f;
    }
    friend GridFunction operator*(double s, const GridFunction& a) { return cplx(s) * a; }

    // Plain pointwise product (no dealiasing).
    friend GridFunction pointwise(const GridFunction& a, const GridFunction& b) {
        return zip(a, b, [](cplx x, cplx y) { return x * y; });
    }

  private:
    static void check_size(const PeriodicGrid& g, std::size_t m) {
        if (m != g.size()) throw std::invalid_argument("grid function: size mismatch");
    }
    template <class F>
    static GridFunction zip(const GridFunction& a, const GridFunction& b, F f) {
        if (!(a.grid_ == b.grid_)) throw std::invalid_argument("grid mismatch");
        std::vector<cplx> v(a.vals_.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(a.vals_[i], b.vals_[i]);
        return from_values(a.grid_, std::move(v));
    }

    PeriodicGrid grid_;
    std::vector<cplx> vals_;
    std::vector<cplx> spec_;
};

// Compact trigonometric series of a grid function for evaluation at
// arbitrary (off-lattice) points; modes below the tolerance are dropped, so
// band-limited fields evaluate in O(active modes).
class TrigEvaluator {
  public:
    TrigEvaluator() = default;
    explicit TrigEvaluator(const GridFunction& f, double tol = 1e-14) {
        double peak = 0.0;
        for (const auto& c : f.spectrum()) peak = std::max(peak, std::abs(c));
        for (std::size_t i = 0; i < f.spectrum().size(); ++i) {
            if (std::abs(f.spectrum()[i]) > tol * peak)
                modes_.push_back({f.grid().freq(i), f.spectrum()[i]});
        }
    }
    cplx eval(const Vec& x) const {
        cplx acc = 0.0;
        for (const auto& [k, c] : modes_)
            acc += c * std::polar(1.0, k[0] * x[0] + k[1] * x[1]);
        return acc;
    }
    std::size_t active_modes() const { return modes_.size(); }

  private:
    std::vector<std::pair<Vec, cplx>> modes_;
};

// integral of conj(f) g over the torus (volume element included).
inline cplx inner_integral(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid() == g.grid())) throw std::invalid_argument("grid mismatch");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < f.values().size(); ++i)
        acc += std::conj(f.values()[i]) * g.values()[i];
    double vol = std::pow(2.0 * pi, f.grid().dim);
    return acc * (vol / double(f.grid().size()));
}

inline double integral_abs(const GridFunction& f) {
    double acc = 0.0;
    for (const auto& v : f.values()) acc += std::abs(v);
    return acc * std::pow(2.0 * pi, f.grid().dim) / double(f.grid().size());
}

// Zero out every mode with |k_axis| > n/3 on some axis (2/3 rule).
inline GridFunction dealias_truncate(const GridFunction& u) {
    const auto& g = u.grid();
    int cut = g.n / 3;
    return u.apply_multiplier([cut, &g](Vec k) {
        for (int a = 0; a < g.dim; ++a)
            if (std::abs(k[a]) > cut) return cplx(0.0);
        return cplx(1.0);
    });
}

// De-aliased quadratic product: truncate factors, multiply, truncate result.
inline GridFunction multiply_dealiased(const GridFunction& a, const GridFunction& b) {
    return dealias_truncate(pointwise(dealias_truncate(a), dealias_truncate(b)));
}

}  // namespace parawave::spectral
