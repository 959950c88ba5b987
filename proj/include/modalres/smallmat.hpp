#pragma once

// Dense kernels for the small complex matrices that carry one mode of the
// generator: partial-pivot solve, Jacobi singular values, characteristic
// polynomial eigenvalues and a Pade matrix exponential.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "modalres/errors.hpp"

namespace modalres {

using Complex = std::complex<double>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor, 16, 16>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, 16, 1>;

using CMat = Mat<Complex>;
using CVec = Vec<Complex>;

namespace smallmat {

inline constexpr int kMaxDim = 16;
inline constexpr int kMaxEigenDim = 8;
inline constexpr int kMaxDurandKernerIterations = 500;

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* who) {
    if (m.rows() != m.cols()) throw InvalidArgument(who, "matrix must be square");
}

template <typename Derived>
double max_abs_entry(const Eigen::MatrixBase<Derived>& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// In-place LU with partial pivoting; returns the row permutation.
template <typename Plain>
std::vector<Eigen::Index> lu_factor(Plain& lu, double scale, const char* who) {
    const Eigen::Index n = lu.rows();
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    const double tiny = 1e-300 * scale;
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index piv = k;
        double best = std::abs(lu(k, k));
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const double v = std::abs(lu(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (!(best > tiny) || scale == 0.0) throw SingularMatrix(who, "matrix is numerically singular");
        if (piv != k) {
            lu.row(k).swap(lu.row(piv));
            std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(piv)]);
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            lu(i, k) /= lu(k, k);
            const auto f = lu(i, k);
            for (Eigen::Index j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
        }
    }
    return perm;
}

template <typename Plain, typename VecT>
VecT lu_solve(const Plain& lu, const std::vector<Eigen::Index>& perm, const VecT& rhs) {
    const Eigen::Index n = lu.rows();
    VecT x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = rhs(perm[static_cast<std::size_t>(i)]);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) x(i) -= lu(i, j) * x(j);
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        for (Eigen::Index j = i + 1; j < n; ++j) x(i) -= lu(i, j) * x(j);
        x(i) /= lu(i, i);
    }
    return x;
}

inline Complex horner(const std::vector<Complex>& coeffs, Complex z) {
    // coeffs[k] multiplies z^k; the polynomial is monic of degree coeffs.size()-1.
    Complex acc = coeffs.back();
    for (std::size_t k = coeffs.size() - 1; k-- > 0;) acc = acc * z + coeffs[k];
    return acc;
}

inline double horner_error_bound(const std::vector<Complex>& coeffs, Complex z) {
    const double r = std::abs(z);
    double acc = std::abs(coeffs.back());
    for (std::size_t k = coeffs.size() - 1; k-- > 0;) acc = acc * r + std::abs(coeffs[k]);
    return acc;
}

}  // namespace detail

/// Solves m x = rhs by Gaussian elimination with partial pivoting.
template <typename DM, typename DV>
typename DV::PlainObject solve(const Eigen::MatrixBase<DM>& m, const Eigen::MatrixBase<DV>& rhs) {
    detail::require_square(m, "solve");
    if (rhs.rows() != m.rows() || rhs.cols() != 1) {
        throw InvalidArgument("solve", "right-hand side dimension does not match the matrix");
    }
    typename DM::PlainObject lu = m;
    const auto perm = detail::lu_factor(lu, detail::max_abs_entry(m), "solve");
    return detail::lu_solve(lu, perm, typename DV::PlainObject(rhs));
}

template <typename DM>
typename DM::PlainObject inverse(const Eigen::MatrixBase<DM>& m) {
    detail::require_square(m, "inverse");
    typename DM::PlainObject lu = m;
    const auto perm = detail::lu_factor(lu, detail::max_abs_entry(m), "inverse");
    const Eigen::Index n = m.rows();
    typename DM::PlainObject inv(n, n);
    using Column = Eigen::Matrix<typename DM::Scalar, DM::RowsAtCompileTime, 1, 0,
                                 DM::MaxRowsAtCompileTime, 1>;
    for (Eigen::Index j = 0; j < n; ++j) {
        Column e = Column::Zero(n);
        e(j) = 1.0;
        inv.col(j) = detail::lu_solve(lu, perm, e);
    }
    return inv;
}

/**
 * Singular values in descending order.
 *
 * One-sided (Hestenes) cyclic Jacobi: each rotation annihilates one
 * off-diagonal entry of m^H m without ever forming the product, so small
 * singular values keep their accuracy.
 */
template <typename DM>
Eigen::Matrix<double, DM::ColsAtCompileTime, 1, 0, DM::MaxColsAtCompileTime, 1>
singular_values(const Eigen::MatrixBase<DM>& m) {
    using Scalar = typename DM::Scalar;
    const Eigen::Index n = m.cols();
    Eigen::Matrix<Scalar, DM::RowsAtCompileTime, DM::ColsAtCompileTime, Eigen::ColMajor,
                  DM::MaxRowsAtCompileTime, DM::MaxColsAtCompileTime>
        u = m;
    constexpr double tol = 4.0 * std::numeric_limits<double>::epsilon();
    for (int sweep = 0; sweep < 80; ++sweep) {
        bool rotated = false;
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double alpha = u.col(p).squaredNorm();
                const double beta = u.col(q).squaredNorm();
                const Scalar gamma = u.col(p).dot(u.col(q));  // conj(u_p) . u_q
                const double g = std::abs(gamma);
                if (g == 0.0 || g <= tol * std::sqrt(alpha * beta)) continue;
                rotated = true;
                // Remove the phase so the 2x2 Gram block is real symmetric.
                const Scalar phase = gamma / g;
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (Eigen::Index i = 0; i < u.rows(); ++i) {
                    const Scalar up = u(i, p);
                    const Scalar uq = u(i, q) / phase;
                    u(i, p) = c * up - s * uq;
                    u(i, q) = s * up + c * uq;
                }
            }
        }
        if (!rotated) break;
    }
    Eigen::Matrix<double, DM::ColsAtCompileTime, 1, 0, DM::MaxColsAtCompileTime, 1> sv(n);
    for (Eigen::Index j = 0; j < n; ++j) sv(j) = u.col(j).norm();
    std::sort(sv.data(), sv.data() + n, std::greater<>());
    return sv;
}

/// Spectral norm (largest singular value).
template <typename DM>
double operator_norm(const Eigen::MatrixBase<DM>& m) {
    detail::require_square(m, "operator_norm");
    if (m.size() == 0) return 0.0;
    return singular_values(m)(0);
}

/// Smallest singular value.
template <typename DM>
double min_singular_value(const Eigen::MatrixBase<DM>& m) {
    detail::require_square(m, "min_singular_value");
    const auto sv = singular_values(m);
    return sv(sv.size() - 1);
}

/// Monic characteristic polynomial coefficients (index k multiplies x^k),
/// by the Faddeev-LeVerrier recursion.
template <typename DM>
std::vector<Complex> characteristic_polynomial(const Eigen::MatrixBase<DM>& m) {
    detail::require_square(m, "characteristic_polynomial");
    const Eigen::Index n = m.rows();
    using Plain = CMat;
    const Plain b = m.template cast<Complex>();
    std::vector<Complex> c(static_cast<std::size_t>(n + 1));
    c[static_cast<std::size_t>(n)] = 1.0;
    Plain mk = Plain::Identity(n, n);
    Plain bm = b;
    c[static_cast<std::size_t>(n - 1)] = -bm.trace();
    for (Eigen::Index k = 2; k <= n; ++k) {
        mk = bm;
        mk.diagonal().array() += c[static_cast<std::size_t>(n - k + 1)];
        bm = b * mk;
        c[static_cast<std::size_t>(n - k)] = -bm.trace() / static_cast<double>(k);
    }
    return c;
}

/**
 * All eigenvalues with multiplicity (n <= 8).
 *
 * The matrix is first scaled to unit max-entry so the polynomial coefficients
 * stay O(1); roots come from Durand-Kerner iteration followed by one Newton
 * polish each. Throws ConvergenceFailure after 500 iterations.
 */
template <typename DM>
std::vector<Complex> eigenvalues(const Eigen::MatrixBase<DM>& m) {
    detail::require_square(m, "eigenvalues");
    const Eigen::Index n = m.rows();
    if (n > kMaxEigenDim) throw InvalidArgument("eigenvalues", "dimension above 8 is not supported");
    if (n == 0) return {};
    const double scale = detail::max_abs_entry(m);
    if (scale == 0.0) return std::vector<Complex>(static_cast<std::size_t>(n), Complex{});
    const CMat b = m.template cast<Complex>() / scale;
    const auto coeffs = characteristic_polynomial(b);

    double bound = 0.0;
    for (std::size_t k = 0; k + 1 < coeffs.size(); ++k) bound = std::max(bound, std::abs(coeffs[k]));
    const double radius = 1.0 + bound;

    std::vector<Complex> z(static_cast<std::size_t>(n));
    const Complex seed(0.4, 0.9);
    Complex pw = 1.0;
    for (auto& zi : z) {
        pw *= seed;
        zi = radius * pw;
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    bool converged = false;
    for (int it = 0; it < kMaxDurandKernerIterations && !converged; ++it) {
        double max_step = 0.0;
        bool at_roundoff = true;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const Complex pz = detail::horner(coeffs, z[i]);
            if (std::abs(pz) > 16.0 * eps * detail::horner_error_bound(coeffs, z[i])) at_roundoff = false;
            Complex denom = 1.0;
            for (std::size_t j = 0; j < z.size(); ++j) {
                if (j != i) denom *= (z[i] - z[j]);
            }
            if (denom == Complex{}) denom = Complex(eps, eps);
            const Complex step = pz / denom;
            z[i] -= step;
            max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(z[i])));
        }
        converged = at_roundoff || max_step <= 1e-15;
    }
    if (!converged) {
        throw ConvergenceFailure("eigenvalues", "Durand-Kerner iteration did not converge in 500 iterations");
    }

    std::vector<Complex> dcoeffs(coeffs.size() - 1);
    for (std::size_t k = 1; k < coeffs.size(); ++k) dcoeffs[k - 1] = coeffs[k] * static_cast<double>(k);
    for (auto& zi : z) {
        // Derivative is not monic; evaluate it directly.
        Complex d = dcoeffs.back();
        for (std::size_t k = dcoeffs.size() - 1; k-- > 0;) d = d * zi + dcoeffs[k];
        const Complex p = detail::horner(coeffs, zi);
        if (std::abs(d) > 0.0) {
            const Complex polished = zi - p / d;
            if (std::abs(detail::horner(coeffs, polished)) <= std::abs(p)) zi = polished;
        }
        zi *= scale;
    }
    return z;
}

/**
 * exp(t m) by scaling and squaring with the diagonal (6,6) Pade approximant.
 * The scaled argument has 1-norm at most 1/2.
 */
template <typename DM>
typename DM::PlainObject expm(const Eigen::MatrixBase<DM>& m, double t) {
    detail::require_square(m, "expm");
    using Plain = typename DM::PlainObject;
    const Eigen::Index n = m.rows();
    Plain x = m * t;
    const double norm1 = x.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > 0.5) {
        squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / 0.5))));
        x /= std::ldexp(1.0, squarings);
    }

    constexpr int q = 6;
    double c = 1.0;
    Plain num = Plain::Identity(n, n);
    Plain den = Plain::Identity(n, n);
    Plain power = Plain::Identity(n, n);
    for (int k = 1; k <= q; ++k) {
        c *= static_cast<double>(q - k + 1) / static_cast<double>(k * (2 * q - k + 1));
        power = power * x;
        num += c * power;
        den += ((k % 2 == 0) ? c : -c) * power;
    }

    Plain lu = den;
    const auto perm = detail::lu_factor(lu, detail::max_abs_entry(den), "expm");
    Plain r(n, n);
    using Column = Eigen::Matrix<typename DM::Scalar, DM::RowsAtCompileTime, 1, 0,
                                 DM::MaxRowsAtCompileTime, 1>;
    for (Eigen::Index j = 0; j < n; ++j) r.col(j) = detail::lu_solve(lu, perm, Column(num.col(j)));
    for (int k = 0; k < squarings; ++k) r = r * r;
    return r;
}

}  // namespace smallmat
}  // namespace modalres
