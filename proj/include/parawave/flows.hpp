#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "parawave/cutoffs.hpp"
#include "parawave/grid.hpp"
#include "parawave/smoothing.hpp"

namespace parawave::flows {

using smoothing::SmoothedSymbol;
using smoothing::SmoothingParams;
using spectral::GridFunction;
using spectral::PeriodicGrid;
using spectral::TrigEvaluator;
using spectral::Vec;
using spectral::cplx;

// 2x2 matrix helpers (d = 1 uses the upper-left entry only).
struct Mat2 {
    double a00 = 1, a01 = 0, a10 = 0, a11 = 1;

    static Mat2 identity() { return {}; }
    Vec apply(const Vec& v) const { return {a00 * v[0] + a01 * v[1], a10 * v[0] + a11 * v[1]}; }
    double det(int dim) const { return dim == 1 ? a00 : a00 * a11 - a01 * a10; }
    Mat2 inverse(int dim) const {
        if (dim == 1) return {1.0 / a00, 0, 0, 1};
        double d = det(2);
        return {a11 / d, -a01 / d, -a10 / d, a00 / d};
    }
    Mat2 transpose() const { return {a00, a10, a01, a11}; }
    double dev_identity(int dim) const {
        double m = std::abs(a00 - 1.0);
        if (dim == 2)
            m = std::max({m, std::abs(a11 - 1.0), std::abs(a01), std::abs(a10)});
        return m;
    }
};

namespace detail {

inline double wrap_pi(double d) {
    const double P = 2.0 * spectral::pi;
    d = std::fmod(d, P);
    if (d > spectral::pi) d -= P;
    if (d < -spectral::pi) d += P;
    return d;
}

// Adams-Moulton style cumulative integral on a uniform grid, 4th order.
inline std::vector<double> cumulative_integral(const std::vector<double>& f, double dt) {
    std::size_t n = f.size();
    std::vector<double> I(n, 0.0);
    if (n < 4) {  // trapezoid fallback for tiny tables
        for (std::size_t m = 1; m < n; ++m) I[m] = I[m - 1] + 0.5 * dt * (f[m - 1] + f[m]);
        return I;
    }
    auto seg = [&](std::size_t m) {  // integral over [t_m, t_{m+1}]
        if (m == 0) return dt * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0;
        if (m + 2 >= n)
            return dt * (9.0 * f[n - 1] + 19.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4]) / 24.0;
        return dt * (-f[m - 1] + 13.0 * f[m] + 13.0 * f[m + 1] - f[m + 2]) / 24.0;
    };
    for (std::size_t m = 1; m < n; ++m) I[m] = I[m - 1] + seg(m - 1);
    return I;
}

}  // namespace detail

// A time-sampled periodic map x -> x + disp(t, x) with its Jacobian, both
// stored as trig series for off-lattice evaluation, plus Newton inversion.
class PeriodicMapTable {
  public:
    PeriodicMapTable() = default;
    PeriodicMapTable(const PeriodicGrid& g, std::vector<GridFunction> disp,
                     std::vector<GridFunction> jac)
        : grid_(g), disp_(std::move(disp)), jac_(std::move(jac)) {
        for (const auto& f : disp_) disp_ev_.emplace_back(f);
        for (const auto& f : jac_) jac_ev_.emplace_back(f);
    }

    const PeriodicGrid& grid() const { return grid_; }

    Vec map(const Vec& x) const {
        Vec out = x;
        for (int c = 0; c < grid_.dim; ++c) out[c] += disp_ev_[std::size_t(c)].eval(x).real();
        return out;
    }
    Mat2 jacobian(const Vec& x) const {
        Mat2 m;
        int d = grid_.dim;
        m.a00 = jac_ev_[0].eval(x).real();
        if (d == 2) {
            m.a01 = jac_ev_[1].eval(x).real();
            m.a10 = jac_ev_[2].eval(x).real();
            m.a11 = jac_ev_[3].eval(x).real();
        }
        return m;
    }

    // Newton solve of map(x) = target (mod 2pi), residual <= tol.
    Vec invert(const Vec& target, double tol = 1e-12, int max_iter = 20) const {
        Vec x = target;
        for (int it = 0; it < max_iter; ++it) {
            Vec fx = map(x);
            Vec r{detail::wrap_pi(fx[0] - target[0]),
                  grid_.dim == 2 ? detail::wrap_pi(fx[1] - target[1]) : 0.0};
            double rn = std::max(std::abs(r[0]), std::abs(r[1]));
            if (rn <= tol) return x;
            Mat2 Jinv = jacobian(x).inverse(grid_.dim);
            Vec step = Jinv.apply(r);
            x[0] -= step[0];
            if (grid_.dim == 2) x[1] -= step[1];
        }
        Vec fx = map(x);
        double rn = std::max(std::abs(detail::wrap_pi(fx[0] - target[0])),
                             grid_.dim == 2 ? std::abs(detail::wrap_pi(fx[1] - target[1])) : 0.0);
        if (rn > 1e3 * tol)
            throw std::runtime_error("flow inversion: Newton stalled, residual " +
                                     std::to_string(rn));
        return x;
    }

    const GridFunction& disp_field(int c) const { return disp_[std::size_t(c)]; }
    const GridFunction& jac_field(int e) const { return jac_[std::size_t(e)]; }

  private:
    PeriodicGrid grid_;
    std::vector<GridFunction> disp_;  // d components
    std::vector<GridFunction> jac_;   // d*d entries, row major
    std::vector<TrigEvaluator> disp_ev_, jac_ev_;
};

// The straightened transport flow X(s; x) with dX/dx from the variational
// equation; one PeriodicMapTable per node of the time grid.
struct FlowMap {
    PeriodicGrid grid;
    SmoothingParams sp{4};
    std::vector<double> t_grid;
    std::vector<PeriodicMapTable> nodes;
    double sup_dev_identity = 0.0;
    bool jacobian_floor_ok = true;  // det >= 0.5 everywhere sampled

    const PeriodicMapTable& at(std::size_t ti) const { return nodes[ti]; }

    // Linear interpolation between nodes for continuous time access.
    Vec X(double t, const Vec& x) const {
        auto [i0, i1, w] = bracket(t);
        Vec a = nodes[i0].map(x);
        if (i0 == i1) return a;
        Vec b = nodes[i1].map(x);
        return {(1 - w) * a[0] + w * b[0], (1 - w) * a[1] + w * b[1]};
    }
    Mat2 dXdx(double t, const Vec& x) const {
        auto [i0, i1, w] = bracket(t);
        Mat2 a = nodes[i0].jacobian(x);
        if (i0 == i1) return a;
        Mat2 b = nodes[i1].jacobian(x);
        return {(1 - w) * a.a00 + w * b.a00, (1 - w) * a.a01 + w * b.a01,
                (1 - w) * a.a10 + w * b.a10, (1 - w) * a.a11 + w * b.a11};
    }

    std::tuple<std::size_t, std::size_t, double> bracket(double t) const {
        if (nodes.size() == 1) return {0, 0, 0.0};
        double dt = t_grid[1] - t_grid[0];
        double s = (t - t_grid.front()) / dt;
        if (s <= 0.0) return {0, 0, 0.0};
        std::size_t i0 = std::min(std::size_t(s), nodes.size() - 2);
        double w = s - double(i0);
        if (w <= 1e-14) return {i0, i0, 0.0};
        return {i0, i0 + 1, std::min(w, 1.0)};
    }
};

// Time-sampled coefficient field V (frozen when a single sample is given),
// interpolated linearly in t and spectrally in x.
struct CoefficientField {
    std::vector<double> t_samples;           // empty or size 1 => frozen
    std::vector<std::vector<GridFunction>> samples;  // [time][component]

    static CoefficientField frozen(std::vector<GridFunction> V) {
        return {{}, {std::move(V)}};
    }

    int dim() const { return int(samples[0].size()); }

    std::vector<GridFunction> at_time(double t) const {
        if (samples.size() == 1) return samples[0];
        double dt = t_samples[1] - t_samples[0];
        double s = (t - t_samples.front()) / dt;
        s = std::max(0.0, std::min(s, double(samples.size() - 1)));
        std::size_t i0 = std::min(std::size_t(s), samples.size() - 2);
        double w = s - double(i0);
        std::vector<GridFunction> out;
        for (std::size_t c = 0; c < samples[i0].size(); ++c)
            out.push_back((1.0 - w) * samples[i0][c] + w * samples[i0 + 1][c]);
        return out;
    }
};

// Integrate dX/ds = S_{j delta}(V)(s, X) from lattice seeds with RK4 and the
// variational equation for dX/dx; report sup |dX/dx - Id| and flag the
// Hadamard floor det >= 0.5.
inline FlowMap straighten_flow(const CoefficientField& V, const SmoothingParams& sp,
                               const std::vector<double>& s_grid, int substeps = 4) {
    const PeriodicGrid& g = V.samples[0][0].grid();
    const int d = g.dim;

    // smoothed field evaluators per V sample
    struct NodeEval {
        std::vector<TrigEvaluator> v;      // d components
        std::vector<TrigEvaluator> dv;     // d*d entries dV_k/dx_l
    };
    std::vector<NodeEval> evs(V.samples.size());
    for (std::size_t m = 0; m < V.samples.size(); ++m) {
        for (int k = 0; k < d; ++k) {
            GridFunction sm = smoothing::smooth_field(V.samples[m][std::size_t(k)], sp);
            evs[m].v.emplace_back(sm);
            for (int l = 0; l < d; ++l) evs[m].dv.emplace_back(sm.derivative(l));
        }
    }
    auto field_at = [&](double t, const Vec& x, Vec& val, Mat2& grad) {
        std::size_t i0 = 0, i1 = 0;
        double w = 0.0;
        if (evs.size() > 1) {
            double dt = V.t_samples[1] - V.t_samples[0];
            double s = std::max(0.0, (t - V.t_samples.front()) / dt);
            i0 = std::min(std::size_t(s), evs.size() - 2);
            i1 = i0 + 1;
            w = std::min(s - double(i0), 1.0);
        }
        auto comp = [&](const NodeEval& e, int k) { return e.v[std::size_t(k)].eval(x).real(); };
        auto dcomp = [&](const NodeEval& e, int k, int l) {
            return e.dv[std::size_t(k * d + l)].eval(x).real();
        };
        for (int k = 0; k < d; ++k) {
            double a = comp(evs[i0], k), b = (i1 != i0) ? comp(evs[i1], k) : a;
            val[std::size_t(k)] = (1 - w) * a + w * b;
        }
        auto gentry = [&](int k, int l) {
            double a = dcomp(evs[i0], k, l), b = (i1 != i0) ? dcomp(evs[i1], k, l) : a;
            return (1 - w) * a + w * b;
        };
        grad.a00 = gentry(0, 0);
        if (d == 2) {
            grad.a01 = gentry(0, 1);
            grad.a10 = gentry(1, 0);
            grad.a11 = gentry(1, 1);
        }
    };

    // state per seed: position + Jacobian
    std::size_t nseed = g.size();
    std::vector<Vec> pos(nseed);
    std::vector<Mat2> jac(nseed, Mat2::identity());
    for (std::size_t i = 0; i < nseed; ++i) pos[i] = g.point(i);

    FlowMap fm;
    fm.grid = g;
    fm.sp = sp;
    fm.t_grid = s_grid;

    auto snapshot = [&]() {
        std::vector<GridFunction> disp;
        std::vector<GridFunction> jfields;
        for (int c = 0; c < d; ++c) {
            std::vector<cplx> v(nseed);
            for (std::size_t i = 0; i < nseed; ++i)
                v[i] = pos[i][std::size_t(c)] - g.point(i)[std::size_t(c)];
            disp.push_back(GridFunction::from_values(g, std::move(v)));
        }
        auto jentry = [&](auto sel) {
            std::vector<cplx> v(nseed);
            for (std::size_t i = 0; i < nseed; ++i) v[i] = sel(jac[i]);
            return GridFunction::from_values(g, std::move(v));
        };
        jfields.push_back(jentry([](const Mat2& m) { return m.a00; }));
        if (d == 2) {
            jfields.push_back(jentry([](const Mat2& m) { return m.a01; }));
            jfields.push_back(jentry([](const Mat2& m) { return m.a10; }));
            jfields.push_back(jentry([](const Mat2& m) { return m.a11; }));
        }
        fm.nodes.emplace_back(g, std::move(disp), std::move(jfields));
        for (const auto& m : jac) {
            fm.sup_dev_identity = std::max(fm.sup_dev_identity, m.dev_identity(d));
            if (m.det(d) < 0.5) fm.jacobian_floor_ok = false;
        }
    };

    snapshot();  // s = t_grid[0]
    for (std::size_t node = 0; node + 1 < s_grid.size(); ++node) {
        double t0 = s_grid[node], t1 = s_grid[node + 1];
        double dt = (t1 - t0) / substeps;
        for (int sub = 0; sub < substeps; ++sub) {
            double tc = t0 + sub * dt;
            for (std::size_t i = 0; i < nseed; ++i) {
                // RK4 on (x, J) jointly
                auto rhs = [&](double t, const Vec& x, const Mat2& J, Vec& kx, Mat2& kJ) {
                    Vec val{0, 0};
                    Mat2 gradv;
                    field_at(t, x, val, gradv);
                    kx = val;
                    kJ = {gradv.a00 * J.a00 + gradv.a01 * J.a10,
                          gradv.a00 * J.a01 + gradv.a01 * J.a11,
                          gradv.a10 * J.a00 + gradv.a11 * J.a10,
                          gradv.a10 * J.a01 + gradv.a11 * J.a11};
                };
                Vec x = pos[i];
                Mat2 J = jac[i];
                Vec k1x, k2x, k3x, k4x;
                Mat2 k1J, k2J, k3J, k4J;
                rhs(tc, x, J, k1x, k1J);
                auto adv = [&](const Vec& kx, const Mat2& kJ, double f) {
                    Vec xx{x[0] + f * kx[0], x[1] + f * kx[1]};
                    Mat2 JJ{J.a00 + f * kJ.a00, J.a01 + f * kJ.a01, J.a10 + f * kJ.a10,
                            J.a11 + f * kJ.a11};
                    return std::make_pair(xx, JJ);
                };
                {
                    auto [xx, JJ] = adv(k1x, k1J, 0.5 * dt);
                    rhs(tc + 0.5 * dt, xx, JJ, k2x, k2J);
                }
                {
                    auto [xx, JJ] = adv(k2x, k2J, 0.5 * dt);
                    rhs(tc + 0.5 * dt, xx, JJ, k3x, k3J);
                }
                {
                    auto [xx, JJ] = adv(k3x, k3J, dt);
                    rhs(tc + dt, xx, JJ, k4x, k4J);
                }
                double c = dt / 6.0;
                pos[i] = {x[0] + c * (k1x[0] + 2 * k2x[0] + 2 * k3x[0] + k4x[0]),
                          x[1] + c * (k1x[1] + 2 * k2x[1] + 2 * k3x[1] + k4x[1])};
                jac[i] = {J.a00 + c * (k1J.a00 + 2 * k2J.a00 + 2 * k3J.a00 + k4J.a00),
                          J.a01 + c * (k1J.a01 + 2 * k2J.a01 + 2 * k3J.a01 + k4J.a01),
                          J.a10 + c * (k1J.a10 + 2 * k2J.a10 + 2 * k3J.a10 + k4J.a10),
                          J.a11 + c * (k1J.a11 + 2 * k2J.a11 + 2 * k3J.a11 + k4J.a11)};
            }
        }
        snapshot();
    }
    return fm;
}

// M, M0, J of the change of variables at a fixed time node.
class ChangeOfVariables {
  public:
    ChangeOfVariables(const FlowMap& fm, double t) : fm_(&fm), t_(t) {}

    Mat2 H(const Vec& y, const Vec& yp) const {
        // 8-point Gauss-Legendre along the segment
        static const double gl_x[4] = {0.069431844202974, 0.330009478207572,
                                       0.669990521792428, 0.930568155797026};
        static const double gl_w[4] = {0.173927422568727, 0.326072577431273,
                                       0.326072577431273, 0.173927422568727};
        Mat2 acc{0, 0, 0, 0};
        for (int q = 0; q < 4; ++q) {
            double lam = gl_x[q];
            Vec p{lam * y[0] + (1 - lam) * yp[0], lam * y[1] + (1 - lam) * yp[1]};
            Mat2 m = fm_->dXdx(t_, p);
            acc.a00 += gl_w[q] * m.a00;
            acc.a01 += gl_w[q] * m.a01;
            acc.a10 += gl_w[q] * m.a10;
            acc.a11 += gl_w[q] * m.a11;
        }
        return acc;
    }
    Mat2 M(const Vec& y, const Vec& yp) const {
        return H(y, yp).transpose().inverse(fm_->grid.dim);
    }
    Mat2 M0(const Vec& y) const { return fm_->dXdx(t_, y).transpose().inverse(fm_->grid.dim); }
    double Jfac(const Vec& y, const Vec& yp) const {
        int d = fm_->grid.dim;
        return std::abs(fm_->dXdx(t_, yp).det(d)) * std::abs(M(y, yp).det(d));
    }

  private:
    const FlowMap* fm_;
    double t_;
};

// The semiclassical symbol
//   p(t,z,zeta) = phi1(M0 zeta) sum_{zeta'} gamma_delta^(zeta', M0 zeta)
//                 chi(h_tilde^2 zeta', M0 zeta) e^{i zeta'. X(t, h_tilde z)};
// the spectral sum is the exact torus realization of the mu-integral against
// the chi kernel (superpolynomial truncation happens in frequency).
class SemiclassicalSymbol {
  public:
    SemiclassicalSymbol(SmoothedSymbol gd, const FlowMap& fm,
                        cutoffs::AdmissibleCutoff cut = {})
        : gd_(std::move(gd)), fm_(&fm), cut_(cut), ht_(gd_.params().h_tilde()) {}

    double h_tilde() const { return ht_; }
    const FlowMap& flow() const { return *fm_; }
    const PeriodicGrid& xgrid() const { return gd_.grid(); }
    bool x_independent() const { return gd_.base().x_independent(); }

    // z lives on the big torus [0, 2pi/h_tilde); y = h_tilde z.
    double p(double t, const Vec& z, const Vec& zeta) const {
        Vec y{ht_ * z[0], ht_ * z[1]};
        Mat2 M0 = ChangeOfVariables(*fm_, t).M0(y);
        Vec rho = M0.apply(zeta);
        double w1 = cutoffs::phi1(rho);
        if (w1 == 0.0) return 0.0;
        if (gd_.base().x_independent())
            return w1 * gd_.base().eval({0.0, 0.0}, rho).real();
        Vec X = fm_->X(t, y);
        const auto& spec = gd_.column(rho).spectrum();
        const PeriodicGrid& g = gd_.grid();
        double cutoff = gd_.params().x_cut();
        cplx acc = 0.0;
        // active modes |zeta'| <= x_cut of the smoothed column
        int R = int(cutoff) + 1;
        if (g.dim == 1) {
            for (int k = -R; k <= R; ++k) {
                cplx c = spec[g.spec_index(k)];
                if (c == cplx(0.0)) continue;
                double w = cut_.chi(ht_ * ht_ * std::abs(double(k)), spectral::norm(rho));
                if (w == 0.0) continue;
                acc += c * w * std::polar(1.0, k * X[0]);
            }
        } else {
            for (int k0 = -R; k0 <= R; ++k0)
                for (int k1 = -R; k1 <= R; ++k1) {
                    cplx c = spec[g.spec_index(k0, k1)];
                    if (c == cplx(0.0)) continue;
                    double nth = ht_ * ht_ * std::hypot(double(k0), double(k1));
                    double w = cut_.chi(nth, spectral::norm(rho));
                    if (w == 0.0) continue;
                    acc += c * w * std::polar(1.0, k0 * X[0] + k1 * X[1]);
                }
        }
        return w1 * acc.real();
    }

    // Off-diagonal symbol p~(t, z, z', zeta) with M(y,y') and the J factor.
    double p_tilde(double t, const Vec& z, const Vec& zp, const Vec& zeta) const {
        Vec y{ht_ * z[0], ht_ * z[1]};
        Vec yp{ht_ * zp[0], ht_ * zp[1]};
        ChangeOfVariables cv(*fm_, t);
        Mat2 Mm = cv.M(y, yp);
        Vec rho = Mm.apply(zeta);
        double w1 = cutoffs::phi1(rho);
        if (w1 == 0.0) return 0.0;
        double Jf = cv.Jfac(y, yp);
        if (gd_.base().x_independent())
            return w1 * Jf * gd_.base().eval({0.0, 0.0}, rho).real();
        Vec X = fm_->X(t, y);
        const auto& spec = gd_.column(rho).spectrum();
        const PeriodicGrid& g = gd_.grid();
        int R = int(gd_.params().x_cut()) + 1;
        cplx acc = 0.0;
        if (g.dim == 1) {
            for (int k = -R; k <= R; ++k) {
                cplx c = spec[g.spec_index(k)];
                if (c == cplx(0.0)) continue;
                double w = cut_.chi(ht_ * ht_ * std::abs(double(k)), spectral::norm(rho));
                if (w == 0.0) continue;
                acc += c * w * std::polar(1.0, k * X[0]);
            }
        } else {
            for (int k0 = -R; k0 <= R; ++k0)
                for (int k1 = -R; k1 <= R; ++k1) {
                    cplx c = spec[g.spec_index(k0, k1)];
                    if (c == cplx(0.0)) continue;
                    double nth = ht_ * ht_ * std::hypot(double(k0), double(k1));
                    double w = cut_.chi(nth, spectral::norm(rho));
                    if (w == 0.0) continue;
                    acc += c * w * std::polar(1.0, k0 * X[0] + k1 * X[1]);
                }
        }
        return w1 * Jf * acc.real();
    }

    // Reference evaluation of the mu-integral by truncated quadrature against
    // a tabulated chi kernel (d = 1); cross-checks the spectral path.
    double p_mu_quadrature(double t, const Vec& z, const Vec& zeta, double mu_max = 40.0,
                           double dmu = 0.05) const {
        if (xgrid().dim != 1) throw std::invalid_argument("mu quadrature probe is d=1 only");
        Vec y{ht_ * z[0], 0.0};
        Mat2 M0 = ChangeOfVariables(*fm_, t).M0(y);
        Vec rho = M0.apply(zeta);
        double w1 = cutoffs::phi1(rho);
        if (w1 == 0.0) return 0.0;
        Vec X = fm_->X(t, y);
        TrigEvaluator col(gd_.column(rho));
        double nrho = spectral::norm(rho);
        // chi_hat(mu, rho) by direct quadrature over the compact theta support
        auto chi_hat = [&](double mu) {
            double L = cut_.eps2 * nrho;
            int nq = 512;
            double acc = 0.0, dth = 2.0 * L / nq;
            for (int i = 0; i < nq; ++i) {
                double th = -L + (i + 0.5) * dth;
                acc += cut_.chi(std::abs(th), nrho) * std::cos(mu * th);
            }
            return acc * dth;
        };
        double acc = 0.0;
        for (double mu = -mu_max; mu <= mu_max; mu += dmu)
            acc += chi_hat(mu) * col.eval({X[0] - ht_ * ht_ * mu, 0.0}).real() * dmu;
        return w1 * acc / (2.0 * spectral::pi);
    }

    // Centered 4th-order differences of p.
    double dp_dzeta(double t, const Vec& z, const Vec& zeta, int axis, double hstep = 2e-3) const {
        double w[5];
        paradiff::detail::fd_weights(1, hstep, w);
        double acc = 0.0;
        for (int i = 0; i < 5; ++i) {
            if (w[i] == 0.0) continue;
            Vec q = zeta;
            q[std::size_t(axis)] += (i - 2) * hstep;
            acc += w[i] * p(t, z, q);
        }
        return acc;
    }
    double dp_dz(double t, const Vec& z, const Vec& zeta, int axis, double hstep = 2e-3) const {
        double w[5];
        paradiff::detail::fd_weights(1, hstep, w);
        double acc = 0.0;
        for (int i = 0; i < 5; ++i) {
            if (w[i] == 0.0) continue;
            Vec q = z;
            q[std::size_t(axis)] += (i - 2) * hstep;
            acc += w[i] * p(t, q, zeta);
        }
        return acc;
    }

  private:
    SmoothedSymbol gd_;
    const FlowMap* fm_;
    cutoffs::AdmissibleCutoff cut_;
    double ht_;
};

// Bicharacteristic trajectories (z(s), zeta(s)) from lattice seeds for one
// xi, integrated with RK4 and finite-difference Hamiltonian gradients.
struct BicharBundle {
    std::vector<double> t;
    // [time][seed]
    std::vector<std::vector<Vec>> z;
    std::vector<std::vector<Vec>> zeta;
};

inline BicharBundle bicharacteristic_flow(const SemiclassicalSymbol& P,
                                          const std::vector<Vec>& seeds, const Vec& xi,
                                          const std::vector<double>& t_grid, int substeps = 2) {
    const int d = P.xgrid().dim;
    BicharBundle B;
    B.t = t_grid;
    std::vector<Vec> z = seeds, zeta(seeds.size(), xi);
    B.z.push_back(z);
    B.zeta.push_back(zeta);
    for (std::size_t node = 0; node + 1 < t_grid.size(); ++node) {
        double dt = (t_grid[node + 1] - t_grid[node]) / substeps;
        for (int sub = 0; sub < substeps; ++sub) {
            double tc = t_grid[node] + sub * dt;
            for (std::size_t i = 0; i < z.size(); ++i) {
                auto rhs = [&](double t, const Vec& zz, const Vec& zt, Vec& kz, Vec& kzeta) {
                    for (int c = 0; c < d; ++c) {
                        kz[std::size_t(c)] = P.dp_dzeta(t, zz, zt, c);
                        kzeta[std::size_t(c)] = -P.dp_dz(t, zz, zt, c);
                    }
                    if (d == 1) kz[1] = kzeta[1] = 0.0;
                };
                Vec k1z{0, 0}, k1t{0, 0}, k2z{0, 0}, k2t{0, 0}, k3z{0, 0}, k3t{0, 0},
                    k4z{0, 0}, k4t{0, 0};
                Vec zz = z[i], zt = zeta[i];
                rhs(tc, zz, zt, k1z, k1t);
                rhs(tc + 0.5 * dt, zz + (0.5 * dt) * k1z, zt + (0.5 * dt) * k1t, k2z, k2t);
                rhs(tc + 0.5 * dt, zz + (0.5 * dt) * k2z, zt + (0.5 * dt) * k2t, k3z, k3t);
                rhs(tc + dt, zz + dt * k3z, zt + dt * k3t, k4z, k4t);
                z[i] = zz + (dt / 6.0) * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
                zeta[i] = zt + (dt / 6.0) * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
            }
        }
        B.z.push_back(z);
        B.zeta.push_back(zeta);
    }
    return B;
}

}  // namespace parawave::flows
