#pragma once

#include "sig/field.hpp"
#include "sig/spd.hpp"

namespace sig {

/// Mean squared information distance between a random mark and the
/// population barycenter: tr(Sigma^{-1} Gamma).
[[nodiscard]] double expected_fr_sq(const SpdMatrix& sigma, const SpdMatrix& gamma);

/// Mean squared transport distance: tr(Gamma).
[[nodiscard]] double expected_w2_sq(const SpdMatrix& gamma);

/// Deviation scale sqrt(2 tr[(Sigma^{-1} Gamma)^2]) of the information
/// distance (one standard deviation of the quadratic form).
[[nodiscard]] double fr_deviation_scale(const SpdMatrix& sigma, const SpdMatrix& gamma);

/// Deviation scale sqrt(2 tr(Gamma^2)) of the transport distance.
[[nodiscard]] double w2_deviation_scale(const SpdMatrix& gamma);

/// Gaussian-chaos tail for the information distance:
///   P(X >= tr(Sigma^{-1} Gamma) + t) <= exp(-t^2 / (8 tr[(Sigma^{-1} Gamma)^2])).
/// Raises DomainError for t < 0.
[[nodiscard]] double fr_tail_bound(const SpdMatrix& sigma, const SpdMatrix& gamma, double t);

/// Same tail shape for the transport distance:
///   P(X >= tr(Gamma) + t) <= exp(-t^2 / (8 tr(Gamma^2))).
[[nodiscard]] double w2_tail_bound(const SpdMatrix& gamma, double t);

/// One-sided Chebyshev: P(X >= mean + alpha * sd) <= 1 / (1 + alpha^2).
[[nodiscard]] double cantelli_bound(double alpha);

/// Window-mean error bound tr(Gamma) / (lambda * |B|).
/// Raises DomainError unless lambda > 0 and the window has positive area.
[[nodiscard]] double mse_bound(const SpdMatrix& gamma, double lambda, const Window& window);

/// Cantelli tail of the window-mean error given exactly n points:
///   mean = tr(Gamma)/n, var = 2 tr(Gamma^2)/n^2,
///   P(X >= t | n) <= var / ((t - mean)^2 + var)   for t >= mean.
/// Raises DomainError for t below the conditional mean or n == 0.
[[nodiscard]] double conditional_cantelli(const SpdMatrix& gamma, std::uint64_t n, double t);

/// conditional_cantelli with the random count replaced by its mean
/// lambda * |B| (a heuristic, not an exact bound).
[[nodiscard]] double meta_cantelli(const SpdMatrix& gamma, double lambda,
                                   const Window& window, double t);

/// First-order approximation E[1/N] ~= 1/(lambda |B| - 1) for the point
/// count of a nonempty window. Raises DomainError when lambda |B| <= 1.
[[nodiscard]] double expected_inv_count(double lambda, const Window& window);

} // namespace sig
