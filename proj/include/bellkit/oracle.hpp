#pragma once

// Brute-force and independent-route checkers plus deterministic samplers.
// Everything here is a verification aid: the grid search replaces the
// closed-form nearest-separable projection with direct minimization, and the
// alternative concurrence route diagonalizes the non-Hermitian product
// rho rho~ with a different eigenvalue algorithm than the main path.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "bellkit/lqcc.hpp"

namespace bellkit::oracle {

// Canonical [0, 1) double from the top 53 bits of the raw engine output.
// std::uniform_real_distribution is not bit-reproducible across standard
// libraries; this is, and suite reports must be byte-identical everywhere.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

inline double gaussian(std::mt19937_64& rng) {
    const double u = 1.0 - uniform01(rng);  // (0, 1], keeps the log finite
    const double v = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

// Uniform over the probability simplex via sorted-uniform spacings.
inline BDState sample_bd(std::mt19937_64& rng) {
    std::array<double, 3> u{uniform01(rng), uniform01(rng), uniform01(rng)};
    std::sort(u.begin(), u.end());
    return BDState({u[0], u[1] - u[0], u[2] - u[1], 1.0 - u[2]});
}

// Uniform over the given entangled cell: p = (e_cell + q)/2 with q from the
// simplex. Samples inside the classification slack of the boundary are
// rejected so the label is unambiguous.
inline BDState sample_entangled_bd(std::mt19937_64& rng, int cell) {
    if (cell < 1 || cell > 4) throw input_error("Bell cell index must be in 1..4");
    for (;;) {
        const Vec4 q = sample_bd(rng).probabilities();
        Vec4 p{0.5 * q[0], 0.5 * q[1], 0.5 * q[2], 0.5 * q[3]};
        p[static_cast<std::size_t>(cell) - 1] += 0.5;
        if (p[static_cast<std::size_t>(cell) - 1] > 0.5 + 1e-9) return BDState(p);
    }
}

inline Vec3 random_unit_vector(std::mt19937_64& rng) {
    for (;;) {
        const Vec3 v{gaussian(rng), gaussian(rng), gaussian(rng)};
        const double n = norm3(v);
        if (n > 1e-6) return {v[0] / n, v[1] / n, v[2] / n};
    }
}

// Haar-ish SU(2) element exp(i theta u.sigma); enough spread for invariance
// checks, and exactly unitary up to roundoff.
inline Mat2 random_unitary(std::mt19937_64& rng) {
    const double theta = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const Vec3 u = random_unit_vector(rng);
    return Mat2::identity() * complexd{std::cos(theta), 0.0} +
           bloch_matrix(u) * complexd{0.0, std::sin(theta)};
}

inline Filter random_filter(std::mt19937_64& rng, double a_max = 0.9) {
    return {uniform(rng, 0.5, 1.5), uniform(rng, -a_max, a_max), random_unit_vector(rng)};
}

// Full-rank random density matrix G G^dag / tr(G G^dag), G complex Gaussian.
inline DensityMatrix sample_density(std::mt19937_64& rng) {
    Mat4 g;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) g(i, j) = complexd{gaussian(rng), gaussian(rng)};
    Mat4 m = g * g.adjoint();
    m = m * (1.0 / std::real(m.trace()));
    m = (m + m.adjoint()) * 0.5;
    return DensityMatrix(m);
}

struct GridSearchResult {
    Vec3 t_best;
    double d_best;
};

// Exhaustive search for the separable correlation vector nearest to t over
// the lattice x_k = -1 + k * grid_step. For each (t1, t2) column the eight
// separability inequalities reduce to an interval of admissible t3, so only
// in-region lattice points are visited. Deterministic: ties keep the
// lexicographically first point in scan order.
inline GridSearchResult brute_force_nearest_separable(const Vec3& t, double grid_step) {
    (void)t_to_probs(t);
    if (!(grid_step > 0.0)) throw input_error("grid_step must be positive");
    const long n = std::llround(2.0 / grid_step);
    if (n < 1 || std::abs(static_cast<double>(n) * grid_step - 2.0) > 1e-9)
        throw input_error("grid_step must divide the interval [-1, 1] into whole cells (got " +
                          std::to_string(grid_step) + ")");

    const double h = grid_step;
    const double slack = 1e-12;  // admit boundary lattice points
    double best_d2 = std::numeric_limits<double>::infinity();
    Vec3 best{};
    for (long i = 0; i <= n; ++i) {
        const double x = -1.0 + static_cast<double>(i) * h;
        for (long j = 0; j <= n; ++j) {
            const double y = -1.0 + static_cast<double>(j) * h;
            // Lower and upper bounds on t3 from the eight |t| inequalities.
            const double lo = std::max({-1.0 - x + y, -1.0 + x - y, -1.0 - x - y, -1.0 + x + y});
            const double hi = std::min({1.0 + x + y, 1.0 - x - y, 1.0 + x - y, 1.0 - x + y});
            if (lo - slack > hi + slack) continue;
            long kmin = static_cast<long>(std::ceil((lo - slack + 1.0) / h - 1e-9));
            long kmax = static_cast<long>(std::floor((hi + slack + 1.0) / h + 1e-9));
            kmin = std::max(kmin, 0L);
            kmax = std::min(kmax, n);
            for (long k = kmin; k <= kmax; ++k) {
                const double z = -1.0 + static_cast<double>(k) * h;
                const double d0 = x - t[0], d1 = y - t[1], d2 = z - t[2];
                const double dist2 = d0 * d0 + d1 * d1 + d2 * d2;
                if (dist2 < best_d2) {
                    best_d2 = dist2;
                    best = {x, y, z};
                }
            }
        }
    }
    return {best, 0.5 * std::sqrt(best_d2)};
}

// Concurrence from the eigenvalues of the non-Hermitian product rho rho~,
// solved with Eigen's Schur-based complex eigensolver. Shares no eigenvalue
// code with the Jacobi chain it cross-checks.
inline double concurrence_alt_route(const DensityMatrix& rho) {
    Eigen::Matrix4cd r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            r(i, j) = rho.mat()(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const Eigen::Matrix4cd prod = r * (yy * r.conjugate() * yy);

    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(prod, false);
    if (solver.info() != Eigen::Success)
        throw numerical_error("eigenvalue iteration for rho rho~ did not converge");
    std::array<double, 4> lam{};
    double worst_imag = 0.0;
    for (int i = 0; i < 4; ++i) {
        const std::complex<double> ev = solver.eigenvalues()(i);
        worst_imag = std::max(worst_imag, std::abs(ev.imag()));
        lam[static_cast<std::size_t>(i)] = std::sqrt(std::max(ev.real(), 0.0));
    }
    if (worst_imag > 1e-8)
        throw numerical_error("eigenvalues of rho rho~ are not real (largest imaginary part " +
                              std::to_string(worst_imag) + ")");
    std::sort(lam.rbegin(), lam.rend());
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

}  // namespace bellkit::oracle
