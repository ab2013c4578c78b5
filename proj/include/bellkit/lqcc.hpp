#pragma once

// Local filtering operations (LQCC): each side applies U f with U a local
// unitary and f = mu (I + a m.sigma) a positive filter, followed by
// renormalization. Includes the closed-form normalization and the exact
// concurrence transformation law, plus the restricted entanglement law for
// orthogonal filter axes.

#include <algorithm>
#include <cmath>
#include <string>

#include "bellkit/measures.hpp"

namespace bellkit {

struct Filter {
    double mu = 1.0;    // overall strength, > 0
    double a = 0.0;     // anisotropy, |a| < 1 keeps the filter invertible
    Vec3 axis{0, 0, 1};  // unit vector
};

inline void validate_filter(const Filter& f, const char* side) {
    if (!(f.mu > 0.0))
        throw input_error(std::string(side) + ": filter strength mu must be positive");
    if (!(std::abs(f.a) < 1.0))
        throw input_error(std::string(side) + ": filter parameter a must satisfy |a| < 1");
    if (std::abs(norm3(f.axis) - 1.0) > 1e-12)
        throw input_error(std::string(side) + ": filter axis must be a unit vector");
}

inline Mat2 filter_matrix(const Filter& f) {
    validate_filter(f, "filter");
    return Mat2::identity() * f.mu + bloch_matrix(f.axis) * (f.mu * f.a);
}

inline Filter flipped_axis(const Filter& f) {
    return {f.mu, f.a, {-f.axis[0], -f.axis[1], -f.axis[2]}};
}

inline double filter_determinant(const Filter& f) { return f.mu * f.mu * (1.0 - f.a * f.a); }

// Defect of f(m) f(-m) = mu^2 (1 - a^2) I, the identity behind the spin-flip
// transformation rule. Zero up to roundoff for every valid filter.
inline double filter_flip_identity_check(const Filter& f) {
    const Mat2 lhs = filter_matrix(f) * filter_matrix(flipped_axis(f));
    return hs_distance(lhs, Mat2::identity() * filter_determinant(f));
}

struct LqccParams {
    Filter filter_a;
    Filter filter_b;
    Mat2 unitary_a = Mat2::identity();
    Mat2 unitary_b = Mat2::identity();
};

inline double unitarity_defect(const Mat2& u) {
    return hs_distance(u.adjoint() * u, Mat2::identity());
}

inline void validate_lqcc_params(const LqccParams& q) {
    validate_filter(q.filter_a, "side a");
    validate_filter(q.filter_b, "side b");
    if (unitarity_defect(q.unitary_a) > 1e-12) throw input_error("unitary_a is not unitary");
    if (unitarity_defect(q.unitary_b) > 1e-12) throw input_error("unitary_b is not unitary");
}

inline bool has_identity_unitaries(const LqccParams& q) {
    return hs_distance(q.unitary_a, Mat2::identity()) <= 1e-12 &&
           hs_distance(q.unitary_b, Mat2::identity()) <= 1e-12;
}

struct LqccOutput {
    DensityMatrix state;
    double norm;  // trace of the unnormalized output, the success weight
};

inline LqccOutput apply_lqcc(const DensityMatrix& rho, const LqccParams& q) {
    validate_lqcc_params(q);
    const Mat4 g = tensor_product(q.unitary_a * filter_matrix(q.filter_a),
                                  q.unitary_b * filter_matrix(q.filter_b));
    Mat4 out = g * rho.mat() * g.adjoint();
    const double tr = std::real(out.trace());
    if (tr <= 1e-12)
        throw domain_error("filter pair annihilates the state (trace = " + std::to_string(tr) +
                           ")");
    out = out * (1.0 / tr);
    out = (out + out.adjoint()) * 0.5;  // shed roundoff before validation
    return {DensityMatrix(out), tr};
}

// Spin flip of the transformed state without forming it: the flip maps the
// filter axis to -m and leaves local unitaries alone, so rho'~ is the
// axis-flipped operation applied to rho~, over the same normalization.
inline Mat4 apply_lqcc_tilde(const DensityMatrix& rho, const LqccParams& q) {
    validate_lqcc_params(q);
    const Mat4 g = tensor_product(q.unitary_a * filter_matrix(q.filter_a),
                                  q.unitary_b * filter_matrix(q.filter_b));
    const double tr = std::real((g * rho.mat() * g.adjoint()).trace());
    if (tr <= 1e-12)
        throw domain_error("filter pair annihilates the state (trace = " + std::to_string(tr) +
                           ")");
    const Mat4 gt = tensor_product(q.unitary_a * filter_matrix(flipped_axis(q.filter_a)),
                                   q.unitary_b * filter_matrix(flipped_axis(q.filter_b)));
    return gt * spin_flip(rho.mat()) * gt.adjoint() * (1.0 / tr);
}

// Closed form for the normalization trace on a BD state with identity
// unitaries: mu^2 nu^2 ((1+a^2)(1+b^2) + 4ab sum_i m_i t_i n_i). Strictly
// positive whenever |a|, |b| < 1.
inline double normalization_factor(const Vec3& t, const LqccParams& q) {
    validate_lqcc_params(q);
    if (!has_identity_unitaries(q))
        throw input_error(
            "closed-form normalization requires identity unitaries; use apply_lqcc's norm");
    (void)t_to_probs(t);  // t must be a physical correlation vector
    const Filter& fa = q.filter_a;
    const Filter& fb = q.filter_b;
    double cross = 0.0;
    for (int i = 0; i < 3; ++i) cross += fa.axis[i] * t[i] * fb.axis[i];
    return fa.mu * fa.mu * fb.mu * fb.mu *
           ((1.0 + fa.a * fa.a) * (1.0 + fb.a * fb.a) + 4.0 * fa.a * fb.a * cross);
}

// Exact transformation law: C(rho') = det(f_a) det(f_b) / t(rho) * C(rho).
inline double predict_concurrence_transform(double c_in, const Vec3& t, const LqccParams& q) {
    if (c_in < -1e-12 || c_in > 1.0 + 1e-12)
        throw input_error("concurrence must lie in [0, 1] (got " + std::to_string(c_in) + ")");
    c_in = std::clamp(c_in, 0.0, 1.0);
    const double norm = normalization_factor(t, q);
    if (norm <= 1e-12) throw domain_error("vanishing normalization factor");
    return filter_determinant(q.filter_a) * filter_determinant(q.filter_b) / norm * c_in;
}

struct RestrictedTransform {
    double measured;   // sqrt(3) tilde distance between the transformed pair
    double predicted;  // closed-form rescaling of the input HS entanglement
};

// Distance-entanglement transformation law under the restriction m.n = 0 or
// ab = 0, where the state and its nearest separable state share one
// normalization. Stated for the singlet cell, so the state is relabeled there
// first; the relabeling is local-unitary and costs nothing.
inline RestrictedTransform restricted_entanglement_transform(const BDState& s,
                                                             const LqccParams& q) {
    validate_lqcc_params(q);
    if (!has_identity_unitaries(q))
        throw input_error("restricted transform requires identity unitaries");
    const double mn = dot3(q.filter_a.axis, q.filter_b.axis);
    const double ab = q.filter_a.a * q.filter_b.a;
    if (std::abs(mn) > 1e-12 && std::abs(ab) > 1e-12)
        throw input_error(
            "restricted transform requires orthogonal filter axes (m.n = 0) or a vanishing "
            "anisotropy product (ab = 0)");

    const BDState canon = canonicalize_to_singlet(s).state;
    const BDState sep = nearest_separable_bd(canon);
    const LqccOutput out = apply_lqcc(to_density_matrix(canon), q);
    const LqccOutput out_sep = apply_lqcc(to_density_matrix(sep), q);

    RestrictedTransform r{};
    r.measured = std::sqrt(3.0) * tilde_distance(out.state, out_sep.state);
    const double norm = normalization_factor(canon.correlation(), q);
    r.predicted = filter_determinant(q.filter_a) * filter_determinant(q.filter_b) / norm *
                  hs_entanglement(canon);
    return r;
}

}  // namespace bellkit
