#pragma once

// Entanglement measures for two-qubit states: Wootters concurrence and
// entanglement of formation for arbitrary density matrices, plus the
// closed-form concurrence, Hilbert-Schmidt and tilde-norm distance measures
// for Bell-diagonal states with their nearest separable states.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "bellkit/bd_states.hpp"

namespace bellkit {

// (sigma_y x sigma_y) conj(m) (sigma_y x sigma_y), written out entrywise.
// sigma_y x sigma_y is the antidiagonal (-1, 1, 1, -1).
inline Mat4 spin_flip(const Mat4& m) {
    static constexpr double f[4] = {-1.0, 1.0, 1.0, -1.0};
    Mat4 r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            r(i, j) = f[i] * f[j] * std::conj(m(3 - i, 3 - j));
    return r;
}

inline DensityMatrix spin_flip(const DensityMatrix& rho) {
    return DensityMatrix(spin_flip(rho.mat()));
}

// Wootters concurrence via the eigenvalues of sqrt(rho) rho~ sqrt(rho); the
// singular values of the standard construction are the square roots of these,
// so the second matrix root is never formed.
inline double concurrence(const DensityMatrix& rho) {
    const Mat4 root = psd_sqrt(rho.mat());
    const Mat4 chain = root * spin_flip(rho.mat()) * root;
    const HermitianEigen<4> es = hermitian_eigen(chain);
    std::array<double, 4> lam{};
    for (std::size_t i = 0; i < 4; ++i) {
        const double v = es.values[i];
        if (v < psd_floor)
            throw domain_error("concurrence: eigenvalue " + std::to_string(v) +
                               " of sqrt(rho) rho~ sqrt(rho) below the PSD tolerance");
        lam[i] = v > 0.0 ? std::sqrt(v) : 0.0;
    }
    return std::clamp(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0);
}

// Closed form for BD states: C = max(0, 2 max_i p_i - 1).
inline double concurrence_bd(const BDState& s) {
    const double p4 = canonicalize_to_singlet(s).state.probabilities()[3];
    return std::clamp(2.0 * p4 - 1.0, 0.0, 1.0);
}

// E(C) = H((1 + sqrt(1 - C^2))/2) in nats, H the binary entropy.
inline double entanglement_of_formation(double c) {
    if (c < -1e-12 || c > 1.0 + 1e-12)
        throw input_error("concurrence must lie in [0, 1] (got " + std::to_string(c) + ")");
    c = std::clamp(c, 0.0, 1.0);
    const double x = 0.5 + 0.5 * std::sqrt(1.0 - c * c);
    const auto plogp = [](double y) { return (y <= 0.0 || y >= 1.0) ? 0.0 : -y * std::log(y); };
    return plogp(x) + plogp(1.0 - x);
}

inline double entanglement_of_formation_bits(double c) {
    return entanglement_of_formation(c) / std::numbers::ln2;
}

// Hilbert-Schmidt distance between BD states reduces to half the Euclidean
// distance of their correlation vectors.
inline double hs_distance_bd(const Vec3& a, const Vec3& b) {
    const double d0 = a[0] - b[0], d1 = a[1] - b[1], d2 = a[2] - b[2];
    return 0.5 * std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
}

// Nearest separable BD state in Hilbert-Schmidt distance. In the singlet cell
// the excess p4 - 1/2 is shed equally onto the other three probabilities,
// which lands the state on the separable boundary face; other cells go
// through the relabeling and back. Separable states return unchanged.
inline BDState nearest_separable_bd(const BDState& s) {
    if (classify_region(s).is_separable()) return s;
    const CanonicalBD canon = canonicalize_to_singlet(s);
    Vec4 p = canon.state.probabilities();
    const double shift = (p[3] - 0.5) / 3.0;
    p = {p[0] + shift, p[1] + shift, p[2] + shift, 0.5};
    return BDState(canon.permutation.apply(p));
}

// Distance entanglement sqrt(3) * D_HS(rho, nearest separable). For BD states
// this equals the concurrence.
inline double hs_entanglement(const BDState& s) {
    return std::sqrt(3.0) * hs_distance_bd(s.correlation(), nearest_separable_bd(s).correlation());
}

// Distance in the tilde norm ||A||~ = sqrt(tr(A A~)). The trace can be
// negative for general state pairs (the norm is not positive definite there);
// values below the PSD tolerance are reported as a domain error, roundoff
// negatives clamp to zero.
inline double tilde_distance(const DensityMatrix& r1, const DensityMatrix& r2) {
    const Mat4 d = r1.mat() - r2.mat();
    const double q = std::real(trace_product(d, spin_flip(d)));
    if (q < psd_floor)
        throw domain_error("tilde distance undefined for this pair: tr((r1-r2)(r1~-r2~)) = " +
                           std::to_string(q));
    return std::sqrt(std::max(q, 0.0));
}

inline double tilde_entanglement_bd(const BDState& s) {
    const DensityMatrix rho = to_density_matrix(s);
    const DensityMatrix sep = to_density_matrix(nearest_separable_bd(s));
    return std::sqrt(3.0) * tilde_distance(rho, sep);
}

struct MeasureReport {
    Vec4 p{};
    Vec3 t{};
    RegionLabel region = RegionLabel::separable();
    double concurrence = 0.0;
    double eof_nats = 0.0;
    Vec4 nearest_p{};
    Vec3 nearest_t{};
    double hs_distance_to_nearest = 0.0;
    double hs_entanglement = 0.0;
    double tilde_entanglement = 0.0;
};

inline MeasureReport make_measure_report(const BDState& s) {
    MeasureReport r;
    r.p = s.probabilities();
    r.t = s.correlation();
    r.region = classify_region(s);
    r.concurrence = concurrence_bd(s);
    r.eof_nats = entanglement_of_formation(r.concurrence);
    const BDState nearest = nearest_separable_bd(s);
    r.nearest_p = nearest.probabilities();
    r.nearest_t = nearest.correlation();
    r.hs_distance_to_nearest = hs_distance_bd(r.t, r.nearest_t);
    r.hs_entanglement = hs_entanglement(s);
    r.tilde_entanglement = tilde_entanglement_bd(s);
    return r;
}

}  // namespace bellkit
