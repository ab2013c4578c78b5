#pragma once

// Fixed-size complex linear algebra for one- and two-qubit operators.
// Everything here is dense, row-major and allocation-free.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>

#include "bellkit/errors.hpp"

namespace bellkit {

using complexd = std::complex<double>;
using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;

// Eigenvalues below this are treated as genuinely negative rather than
// roundoff; anything in (psd_floor, 0) is clamped to zero.
inline constexpr double psd_floor = -1e-8;

// Hermiticity defect accepted by the eigensolver.
inline constexpr double eigen_hermitian_tol = 1e-10;

// Validation tolerances for density matrices.
inline constexpr double density_hermitian_tol = 1e-12;
inline constexpr double density_trace_tol = 1e-12;
inline constexpr double density_psd_tol = -1e-10;

inline double dot3(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

template <std::size_t N>
class ComplexMatrix {
    static_assert(N == 2 || N == 4, "two-qubit algebra only needs dimensions 2 and 4");

  public:
    constexpr ComplexMatrix() = default;

    ComplexMatrix(std::initializer_list<complexd> entries) {
        if (entries.size() != N * N)
            throw input_error("matrix initializer needs " + std::to_string(N * N) + " entries");
        std::copy(entries.begin(), entries.end(), e_.begin());
    }

    static ComplexMatrix identity() {
        ComplexMatrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(const std::array<double, N>& d) {
        ComplexMatrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
        return m;
    }

    complexd& operator()(std::size_t r, std::size_t c) { return e_[r * N + c]; }
    const complexd& operator()(std::size_t r, std::size_t c) const { return e_[r * N + c]; }

    ComplexMatrix adjoint() const {
        ComplexMatrix m;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) m(i, j) = std::conj((*this)(j, i));
        return m;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix m;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) m(i, j) = (*this)(j, i);
        return m;
    }

    ComplexMatrix conjugate() const {
        ComplexMatrix m;
        for (std::size_t i = 0; i < N * N; ++i) m.e_[i] = std::conj(e_[i]);
        return m;
    }

    complexd trace() const {
        complexd t{};
        for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const complexd& v : e_) s += std::norm(v);
        return std::sqrt(s);
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        for (std::size_t i = 0; i < N * N; ++i) e_[i] += o.e_[i];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        for (std::size_t i = 0; i < N * N; ++i) e_[i] -= o.e_[i];
        return *this;
    }

    ComplexMatrix& operator*=(complexd s) {
        for (complexd& v : e_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, complexd s) { return a *= s; }
    friend ComplexMatrix operator*(complexd s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= complexd{s, 0.0}; }
    friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= complexd{s, 0.0}; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        ComplexMatrix r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const complexd aik = a(i, k);
                for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    bool operator==(const ComplexMatrix&) const = default;

  private:
    std::array<complexd, N * N> e_{};
};

using Mat2 = ComplexMatrix<2>;
using Mat4 = ComplexMatrix<4>;

inline Mat2 pauli_x() { return {0, 1, 1, 0}; }
inline Mat2 pauli_y() { return {0, complexd{0, -1}, complexd{0, 1}, 0}; }
inline Mat2 pauli_z() { return {1, 0, 0, -1}; }

// m . sigma for a real vector m.
inline Mat2 bloch_matrix(const Vec3& m) {
    return {complexd{m[2], 0}, complexd{m[0], -m[1]}, complexd{m[0], m[1]}, complexd{-m[2], 0}};
}

// Kronecker product with the first factor acting on the slow (A) index.
inline Mat4 tensor_product(const Mat2& a, const Mat2& b) {
    Mat4 r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return r;
}

template <std::size_t N>
double hermiticity_defect(const ComplexMatrix<N>& m) {
    return (m - m.adjoint()).frobenius_norm();
}

// tr(a b) without forming the product.
template <std::size_t N>
complexd trace_product(const ComplexMatrix<N>& a, const ComplexMatrix<N>& b) {
    complexd t{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) t += a(i, j) * b(j, i);
    return t;
}

// Frobenius distance; for Hermitian arguments this is the Hilbert-Schmidt
// distance sqrt(tr((a-b)^2)).
template <std::size_t N>
double hs_distance(const ComplexMatrix<N>& a, const ComplexMatrix<N>& b) {
    return (a - b).frobenius_norm();
}

template <std::size_t N>
struct HermitianEigen {
    std::array<double, N> values{};  // descending
    ComplexMatrix<N> vectors;        // values[i] pairs with column i
};

// Cyclic complex Jacobi iteration. Quadratically convergent for these sizes;
// the sweep cap is never reached in practice.
template <std::size_t N>
HermitianEigen<N> hermitian_eigen(const ComplexMatrix<N>& h) {
    if (hermiticity_defect(h) > eigen_hermitian_tol)
        throw input_error("hermitian_eigen: input is not Hermitian (defect " +
                          std::to_string(hermiticity_defect(h)) + ")");

    // Work on the symmetrized copy so input roundoff cannot bias the rotations.
    ComplexMatrix<N> a;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
    ComplexMatrix<N> v = ComplexMatrix<N>::identity();

    const double scale = a.frobenius_norm() + 1.0;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = i + 1; j < N; ++j) off += std::norm(a(i, j));
        if (std::sqrt(2.0 * off) <= 1e-15 * scale) break;

        for (std::size_t p = 0; p + 1 < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag <= 1e-300) {
                    a(p, q) = a(q, p) = complexd{};
                    continue;
                }
                // Unitary plane rotation G with G(p,p) = c*phase, G(p,q) = -s*phase,
                // G(q,p) = s, G(q,q) = c; chosen so (G^dag A G)(p,q) = 0.
                const complexd phase = a(p, q) / mag;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                // smaller-magnitude root of t^2 - 2 tau t - 1 = 0 for this
                // rotation convention (the sign differs from the textbook
                // J(p,q) = +s layout)
                const double t = tau >= 0.0 ? -1.0 / (tau + std::hypot(1.0, tau))
                                            : 1.0 / (std::hypot(1.0, tau) - tau);
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const complexd cp = c * phase;
                const complexd sp = s * phase;
                for (std::size_t i = 0; i < N; ++i) {  // A <- A G, V <- V G
                    const complexd ap = a(i, p), aq = a(i, q);
                    a(i, p) = ap * cp + aq * s;
                    a(i, q) = aq * c - ap * sp;
                    const complexd vp = v(i, p), vq = v(i, q);
                    v(i, p) = vp * cp + vq * s;
                    v(i, q) = vq * c - vp * sp;
                }
                for (std::size_t j = 0; j < N; ++j) {  // A <- G^dag A
                    const complexd ap = a(p, j), aq = a(q, j);
                    a(p, j) = std::conj(cp) * ap + s * aq;
                    a(q, j) = c * aq - std::conj(sp) * ap;
                }
                a(p, q) = a(q, p) = complexd{};
                a(p, p) = complexd{a(p, p).real(), 0.0};
                a(q, q) = complexd{a(q, q).real(), 0.0};
            }
    }

    std::array<std::size_t, N> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    HermitianEigen<N> out;
    for (std::size_t r = 0; r < N; ++r) {
        out.values[r] = a(order[r], order[r]).real();
        for (std::size_t i = 0; i < N; ++i) out.vectors(i, r) = v(i, order[r]);
    }
    return out;
}

// Square root of a PSD Hermitian matrix. Eigenvalues in (psd_floor, 0) are
// roundoff and clamp to zero; anything below psd_floor is a domain error.
template <std::size_t N>
ComplexMatrix<N> psd_sqrt(const ComplexMatrix<N>& m) {
    const HermitianEigen<N> es = hermitian_eigen(m);
    std::array<double, N> roots{};
    for (std::size_t i = 0; i < N; ++i) {
        const double lam = es.values[i];
        if (lam < psd_floor)
            throw domain_error("psd_sqrt: eigenvalue " + std::to_string(lam) +
                               " below the PSD tolerance");
        roots[i] = lam > 0.0 ? std::sqrt(lam) : 0.0;
    }
    ComplexMatrix<N> out = es.vectors * ComplexMatrix<N>::diagonal(roots) * es.vectors.adjoint();
    for (std::size_t i = 0; i < N; ++i) {  // rotation roundoff cleanup
        out(i, i) = complexd{out(i, i).real(), 0.0};
        for (std::size_t j = i + 1; j < N; ++j) {
            out(i, j) = 0.5 * (out(i, j) + std::conj(out(j, i)));
            out(j, i) = std::conj(out(i, j));
        }
    }
    return out;
}

// Validated two-qubit density matrix: Hermitian, unit trace, PSD within
// tolerance. Construction is the only gate; the payload stays as given.
class DensityMatrix {
  public:
    explicit DensityMatrix(const Mat4& m) : m_(m) {
        const double herm = hermiticity_defect(m_);
        if (herm > density_hermitian_tol)
            throw input_error("density matrix is not Hermitian (defect " + std::to_string(herm) +
                              ")");
        const complexd tr = m_.trace();
        if (std::abs(tr - complexd{1.0, 0.0}) > density_trace_tol)
            throw input_error("density matrix must have unit trace (trace = " +
                              std::to_string(tr.real()) + ")");
        const HermitianEigen<4> es = hermitian_eigen(m_);
        if (es.values[3] < density_psd_tol)
            throw input_error("density matrix has a negative eigenvalue (" +
                              std::to_string(es.values[3]) + ")");
    }

    const Mat4& mat() const noexcept { return m_; }

  private:
    Mat4 m_;
};

// Transpose on the B (fast) index only. Involutive and trace-preserving.
inline Mat4 partial_transpose_b(const Mat4& m) {
    Mat4 r;
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t a2 = 0; a2 < 2; ++a2)
                for (std::size_t b2 = 0; b2 < 2; ++b2)
                    r(2 * a + b, 2 * a2 + b2) = m(2 * a + b2, 2 * a2 + b);
    return r;
}

inline Mat4 partial_transpose_b(const DensityMatrix& rho) {
    return partial_transpose_b(rho.mat());
}

}  // namespace bellkit
