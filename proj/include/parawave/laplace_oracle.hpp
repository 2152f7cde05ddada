#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "parawave/grid.hpp"

namespace parawave::waterwaves {

// Independent finite-difference oracle for the Dirichlet-Neumann operator on
// the strip {-H < y < eta(x)}, d = 1, Dirichlet data on top and a Neumann
// (rigid bottom) condition below.  The strip is mapped onto the rectangle
// s in [0,1] by y = -H + s (H + eta(x)); second-order centered stencils in
// (x,s), SparseLU solve, optional simultaneous-grid Richardson step.

struct OracleResult {
    std::vector<double> values;  // G(eta) f at x-lattice points with the given stride
    int stride = 1;
};

namespace detail_oracle {

inline std::vector<double> solve_strip_dn(const std::vector<double>& eta,
                                          const std::vector<double>& detax,
                                          const std::vector<double>& detaxx,
                                          const std::vector<double>& f, double H, int ns) {
    const int nx = int(eta.size());
    const double hx = 2.0 * spectral::pi / nx;
    const double hs = 1.0 / ns;
    const int rows = nx * (ns + 1);
    auto id = [&](int i, int m) { return ((i % nx + nx) % nx) * (ns + 1) + m; };

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(std::size_t(rows) * 9);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);

    for (int i = 0; i < nx; ++i) {
        const double D = H + eta[std::size_t(i)];
        const double ep = detax[std::size_t(i)];
        const double epp = detaxx[std::size_t(i)];
        for (int m = 0; m <= ns; ++m) {
            const int r = id(i, m);
            if (m == ns) {  // Dirichlet top
                trip.emplace_back(r, r, 1.0);
                rhs[r] = f[std::size_t(i)];
                continue;
            }
            if (m == 0) {  // Neumann bottom: u_s = 0, one-sided second order
                trip.emplace_back(r, id(i, 0), -3.0 / (2.0 * hs));
                trip.emplace_back(r, id(i, 1), 4.0 / (2.0 * hs));
                trip.emplace_back(r, id(i, 2), -1.0 / (2.0 * hs));
                continue;
            }
            const double s = m * hs;
            const double sx = -s * ep / D;
            const double sy = 1.0 / D;
            const double A = sx * sx + sy * sy;
            const double B = 2.0 * sx;
            const double C = -s * (epp / D - 2.0 * ep * ep / (D * D));

            // u_xx
            trip.emplace_back(r, id(i + 1, m), 1.0 / (hx * hx));
            trip.emplace_back(r, id(i - 1, m), 1.0 / (hx * hx));
            trip.emplace_back(r, id(i, m), -2.0 / (hx * hx));
            // A u_ss
            trip.emplace_back(r, id(i, m + 1), A / (hs * hs));
            trip.emplace_back(r, id(i, m - 1), A / (hs * hs));
            trip.emplace_back(r, id(i, m), -2.0 * A / (hs * hs));
            // B u_xs
            const double cxs = B / (4.0 * hx * hs);
            trip.emplace_back(r, id(i + 1, m + 1), cxs);
            trip.emplace_back(r, id(i - 1, m - 1), cxs);
            trip.emplace_back(r, id(i + 1, m - 1), -cxs);
            trip.emplace_back(r, id(i - 1, m + 1), -cxs);
            // C u_s
            trip.emplace_back(r, id(i, m + 1), C / (2.0 * hs));
            trip.emplace_back(r, id(i, m - 1), -C / (2.0 * hs));
        }
    }

    Eigen::SparseMatrix<double> Amat(rows, rows);
    Amat.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(Amat);
    if (lu.info() != Eigen::Success) throw std::runtime_error("laplace oracle: factorization failed");
    Eigen::VectorXd u = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw std::runtime_error("laplace oracle: solve failed");

    // G = u_s s_y - eta'(u_x + u_s s_x) at the top row.
    std::vector<double> out(static_cast<std::size_t>(nx), 0.0);
    for (int i = 0; i < nx; ++i) {
        const double D = H + eta[std::size_t(i)];
        const double ep = detax[std::size_t(i)];
        const double us = (3.0 * u[id(i, ns)] - 4.0 * u[id(i, ns - 1)] + u[id(i, ns - 2)]) /
                          (2.0 * hs);
        const double ux = (u[id(i + 1, ns)] - u[id(i - 1, ns)]) / (2.0 * hx);
        const double sx_top = -ep / D;
        out[std::size_t(i)] = us / D - ep * (ux + us * sx_top);
    }
    return out;
}

}  // namespace detail_oracle

inline OracleResult laplace_dn_oracle(const spectral::GridFunction& eta,
                                      const spectral::GridFunction& f, double depth, int ns,
                                      bool richardson = true) {
    if (eta.grid().dim != 1) throw std::invalid_argument("laplace oracle: d=1 only");
    const int nx = eta.grid().n;
    if (richardson && (nx % 2 != 0 || ns % 2 != 0))
        throw std::invalid_argument("laplace oracle: richardson needs even sizes");

    auto reals = [](const spectral::GridFunction& g) {
        std::vector<double> v(g.values().size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = g.values()[i].real();
        return v;
    };
    auto sub = [](const std::vector<double>& v) {
        std::vector<double> o(v.size() / 2);
        for (std::size_t i = 0; i < o.size(); ++i) o[i] = v[2 * i];
        return o;
    };

    std::vector<double> ev = reals(eta);
    std::vector<double> ex = reals(eta.derivative(0));
    std::vector<double> exx = reals(eta.derivative(0).derivative(0));
    std::vector<double> fv = reals(f);

    std::vector<double> fine = detail_oracle::solve_strip_dn(ev, ex, exx, fv, depth, ns);
    if (!richardson) return {fine, 1};

    std::vector<double> coarse = detail_oracle::solve_strip_dn(sub(ev), sub(ex), sub(exx),
                                                               sub(fv), depth, ns / 2);
    std::vector<double> out(coarse.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (4.0 * fine[2 * i] - coarse[i]) / 3.0;
    return {out, 2};
}

}  // namespace parawave::waterwaves
