#pragma once

#include "sig/gaussian.hpp"

namespace sig {

/// Operand-equality tolerance used when selecting a closed-form slice:
/// Frobenius (covariances) or Euclidean (means), relative to magnitude.
inline constexpr double kSliceTol = 1e-10;

/// Squared Fisher-Rao distance between Gaussians, on the two slices where a
/// closed form exists:
///   equal covariances:  (m1-m2)' S^{-1} (m1-m2)
///   equal means:        1/2 * sum_i log^2 lambda_i,
///                       lambda_i eigenvalues of S1^{-1/2} S2 S1^{-1/2}.
/// Anything else raises UnsupportedGeodesic.
[[nodiscard]] double fisher_rao_distance_sq(const Gaussian& p, const Gaussian& q);

/// Squared 2-Wasserstein distance between Gaussians:
///   |m1-m2|^2 + tr(S1 + S2 - 2 (S^{1/2} S' S^{1/2})^{1/2}).
/// Exactly symmetric: the lexicographically smaller operand supplies the
/// inner square-root factor. A trace residual in [-1e-10, 0) is clamped to
/// zero; anything more negative raises NumericalBreakdown.
[[nodiscard]] double wasserstein2_distance_sq(const Gaussian& p, const Gaussian& q);

/// Affine-invariant distance between covariance matrices:
///   || log(A^{-1/2} B A^{-1/2}) ||_F.
/// Exactly symmetric by canonical operand ordering.
[[nodiscard]] double affine_invariant_distance(const SpdMatrix& a, const SpdMatrix& b);

/// Squared distance dispatcher over MetricKind. AffineInvariant compares the
/// covariances and requires the means to coincide within kSliceTol; it raises
/// Unsupported otherwise.
[[nodiscard]] double distance_sq(const Gaussian& p, const Gaussian& q, MetricKind metric);

} // namespace sig
