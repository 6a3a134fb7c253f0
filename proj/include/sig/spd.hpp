#pragma once

#include <Eigen/Dense>

#include "sig/errors.hpp"

namespace sig {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Eigenvalues below this floor are treated as numerically zero whenever an
/// inverse square root or logarithm is taken.
inline constexpr double kEigenvalueFloor = 1e-12;

/// Entrywise symmetry tolerance accepted at construction:
/// |a_ij - a_ji| <= kSymmetryTol * max(1, |a_ij|).
inline constexpr double kSymmetryTol = 1e-12;

/// A validated symmetric positive definite matrix.
///
/// Construction checks that every entry is finite, that the matrix is
/// symmetric within kSymmetryTol, and that the smallest eigenvalue is
/// strictly positive; the stored matrix is the symmetrized part, so
/// downstream solvers may assume exact symmetry.
class SpdMatrix {
public:
    explicit SpdMatrix(Mat m);

    /// Identity of the given dimension.
    static SpdMatrix identity(int dim);

    [[nodiscard]] int dim() const { return static_cast<int>(m_.rows()); }
    [[nodiscard]] const Mat& mat() const { return m_; }
    [[nodiscard]] double operator()(int i, int j) const { return m_(i, j); }
    [[nodiscard]] double trace() const { return m_.trace(); }

private:
    Mat m_;
};

/// Principal square root S with S*S = a, via eigendecomposition.
/// Round-off eigenvalues are clamped at kEigenvalueFloor.
[[nodiscard]] SpdMatrix spd_sqrt(const SpdMatrix& a);

/// Inverse of the principal square root. Raises NearSingular when an
/// eigenvalue sits below kEigenvalueFloor.
[[nodiscard]] SpdMatrix spd_inv_sqrt(const SpdMatrix& a);

/// Matrix logarithm (symmetric, in general indefinite). Raises NearSingular
/// when an eigenvalue sits below kEigenvalueFloor.
[[nodiscard]] Mat spd_log(const SpdMatrix& a);

/// Matrix exponential of a symmetric matrix; always SPD.
/// Raises InvalidMatrix if s is non-finite or asymmetric.
[[nodiscard]] SpdMatrix spd_exp(const Mat& s);

/// Squared Mahalanobis form v' * a^{-1} * v, computed through a solve
/// rather than an explicit inverse.
[[nodiscard]] double mahalanobis_sq(const Vec& v, const SpdMatrix& a);

namespace detail {

/// sqrt of an (assumed) symmetric matrix, clamping eigenvalues at the floor.
/// Internal: used on intermediate products that are SPD only up to round-off.
[[nodiscard]] Mat sym_sqrt(const Mat& m);

/// log of an (assumed) symmetric matrix; raises NearSingular below the floor.
[[nodiscard]] Mat sym_log(const Mat& m);

/// Frobenius check |a - a'|, relative to entry magnitude, within kSymmetryTol.
[[nodiscard]] bool is_symmetric(const Mat& m);

} // namespace detail

} // namespace sig
