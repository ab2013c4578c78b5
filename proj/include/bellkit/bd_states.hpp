#pragma once

// Bell-diagonal two-qubit states in both parametrizations: Bell-basis
// probabilities p = (p1, p2, p3, p4) and the correlation vector
// t = (t1, t2, t3) of rho = (1/4)(I + sum_i t_i sigma_i x sigma_i).
//
// Bell basis order: psi_1 = (|uu> + |dd>)/sqrt2, psi_2 = (|uu> - |dd>)/sqrt2,
// psi_3 = (|ud> + |du>)/sqrt2, psi_4 = (|ud> - |du>)/sqrt2 (the singlet).
// Computational basis order: |uu>, |ud>, |du>, |dd>, A on the slow index.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "bellkit/linalg.hpp"

namespace bellkit {

// States within this slack of the separable boundary classify as separable.
inline constexpr double region_boundary_slack = 1e-12;

inline Vec3 probs_to_t(const Vec4& p) {
    static constexpr const char* labels[4] = {"p1", "p2", "p3", "p4"};
    for (std::size_t i = 0; i < 4; ++i)
        if (p[i] < -1e-12 || p[i] > 1.0 + 1e-12)
            throw input_error(std::string(labels[i]) + " must lie in [0, 1] (got " +
                              std::to_string(p[i]) + ")");
    const double sum = p[0] + p[1] + p[2] + p[3];
    if (std::abs(sum - 1.0) > 1e-12)
        throw input_error("probabilities must sum to 1 (sum = " + std::to_string(sum) + ")");
    return {p[0] - p[1] + p[2] - p[3], -p[0] + p[1] + p[2] - p[3], p[0] + p[1] - p[2] - p[3]};
}

inline Vec4 t_to_probs(const Vec3& t) {
    const Vec4 p = {0.25 * (1.0 + t[0] - t[1] + t[2]), 0.25 * (1.0 - t[0] + t[1] + t[2]),
                    0.25 * (1.0 + t[0] + t[1] - t[2]), 0.25 * (1.0 - t[0] - t[1] - t[2])};
    static constexpr const char* faces[4] = {"1 + t1 - t2 + t3", "1 - t1 + t2 + t3",
                                             "1 + t1 + t2 - t3", "1 - t1 - t2 - t3"};
    for (std::size_t i = 0; i < 4; ++i)
        if (p[i] < -1e-12)
            throw domain_error("not a physical Bell-diagonal state: " + std::string(faces[i]) +
                               " >= 0 violated (value = " + std::to_string(4.0 * p[i]) + ")");
    return p;
}

class BDState {
  public:
    explicit BDState(const Vec4& probs) : p_(probs) { (void)probs_to_t(p_); }

    static BDState from_t(const Vec3& t) { return BDState(t_to_probs(t)); }

    const Vec4& probabilities() const noexcept { return p_; }

    Vec3 correlation() const noexcept {
        return {p_[0] - p_[1] + p_[2] - p_[3], -p_[0] + p_[1] + p_[2] - p_[3],
                p_[0] + p_[1] - p_[2] - p_[3]};
    }

  private:
    Vec4 p_;
};

// Projector onto Bell vector `cell` (1..4). Entries are exact multiples of 1/2.
inline DensityMatrix bell_projector(int cell) {
    if (cell < 1 || cell > 4) throw input_error("Bell cell index must be in 1..4");
    struct Component {
        std::size_t i, j;
        double sign;
    };
    static constexpr Component comp[4] = {{0, 3, 1.0}, {0, 3, -1.0}, {1, 2, 1.0}, {1, 2, -1.0}};
    const Component c = comp[cell - 1];
    Mat4 m;
    m(c.i, c.i) = 0.5;
    m(c.j, c.j) = 0.5;
    m(c.i, c.j) = 0.5 * c.sign;
    m(c.j, c.i) = 0.5 * c.sign;
    return DensityMatrix(m);
}

inline DensityMatrix to_density_matrix(const BDState& s) {
    Mat4 m;
    for (int cell = 1; cell <= 4; ++cell)
        m += bell_projector(cell).mat() * s.probabilities()[cell - 1];
    return DensityMatrix(m);
}

class RegionLabel {
  public:
    static RegionLabel separable() { return RegionLabel(0); }

    static RegionLabel entangled_cell(int cell) {
        if (cell < 1 || cell > 4) throw input_error("Bell cell index must be in 1..4");
        return RegionLabel(cell);
    }

    bool is_separable() const noexcept { return cell_ == 0; }
    int cell() const noexcept { return cell_; }  // 0 when separable

    std::string name() const {
        return cell_ == 0 ? std::string("separable") : "cell_" + std::to_string(cell_);
    }

    friend bool operator==(const RegionLabel&, const RegionLabel&) = default;

  private:
    explicit RegionLabel(int cell) : cell_(cell) {}
    int cell_ = 0;
};

// A BD state is entangled iff one probability exceeds 1/2, and that index
// names the cell. Boundary states (max p within the slack of 1/2) count as
// separable; ties below that can only be separable.
inline RegionLabel classify_region(const BDState& s) {
    const Vec4& p = s.probabilities();
    std::size_t arg = 0;
    for (std::size_t i = 1; i < 4; ++i)
        if (p[i] > p[arg]) arg = i;
    if (p[arg] <= 0.5 + region_boundary_slack) return RegionLabel::separable();
    return RegionLabel::entangled_cell(static_cast<int>(arg) + 1);
}

// Relabeling that exchanges one Bell cell with the singlet cell. Each such
// exchange is realizable by local unitaries, so it preserves every
// entanglement measure. Self-inverse.
struct BellPermutation {
    int swapped_cell = 4;  // cell exchanged with cell 4; 4 means identity

    bool is_identity() const noexcept { return swapped_cell == 4; }

    Vec4 apply(Vec4 p) const {
        std::swap(p[static_cast<std::size_t>(swapped_cell) - 1], p[3]);
        return p;
    }
};

struct CanonicalBD {
    BDState state;
    BellPermutation permutation;
};

// Move the largest probability into the singlet slot. Identity when p4 is
// already maximal (ties included); otherwise the lowest-index maximum among
// p1..p3 is swapped in.
inline CanonicalBD canonicalize_to_singlet(const BDState& s) {
    const Vec4& p = s.probabilities();
    std::size_t arg = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (p[i] > p[arg]) arg = i;
    if (p[3] >= p[arg]) return {s, BellPermutation{4}};
    const BellPermutation perm{static_cast<int>(arg) + 1};
    return {BDState(perm.apply(p)), perm};
}

// Matrix elements <psi_i| m |psi_j> in the Bell basis.
inline Mat4 bell_basis_coefficients(const Mat4& m) {
    const double r = std::sqrt(0.5);
    const double v[4][4] = {{r, 0, 0, r}, {r, 0, 0, -r}, {0, r, r, 0}, {0, r, -r, 0}};
    Mat4 out;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            complexd acc{};
            for (std::size_t k = 0; k < 4; ++k) {
                if (v[i][k] == 0.0) continue;
                for (std::size_t l = 0; l < 4; ++l) acc += v[i][k] * m(k, l) * v[j][l];
            }
            out(i, j) = acc;
        }
    return out;
}

}  // namespace bellkit
