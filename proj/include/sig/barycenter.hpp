#pragma once

#include <vector>

#include "sig/gaussian.hpp"

namespace sig {

/// A finite weighted family of Gaussians. Weights must be positive and
/// finite; they are normalized internally, so any positive scale works.
struct WeightedGaussianSet {
    std::vector<Gaussian> components;
    std::vector<double> weights;

    /// Validates sizes, weight positivity, and dimension consistency.
    void validate() const;

    /// Weights scaled to sum to one.
    [[nodiscard]] std::vector<double> normalized_weights() const;
};

struct SolverOptions {
    double tol = 1e-10;  ///< Frobenius residual target
    int max_iter = 1000; ///< iteration budget before NoConvergence
};

/// Result of an iterative barycenter solve. residual_history holds the
/// residual after every accepted iteration (monotonicity diagnostics).
struct BarycenterResult {
    Gaussian barycenter;
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> residual_history;
};

struct SpdMeanResult {
    SpdMatrix mean;
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> residual_history;
};

/// Weighted average of the component means (the barycenter mean under both
/// transport and information geometries).
[[nodiscard]] Vec mean_component(const WeightedGaussianSet& set);

/// 2-Wasserstein barycenter via the covariance fixed-point iteration
///   S <- S^{-1/2} (sum_i w_i (S^{1/2} C_i S^{1/2})^{1/2})^2 S^{-1/2},
/// initialized at the arithmetic covariance mean, stopping when the
/// Frobenius step ||S_{n+1}-S_n|| <= tol. Raises NoConvergence past the
/// iteration budget.
[[nodiscard]] BarycenterResult wasserstein_barycenter(const WeightedGaussianSet& set,
                                                      const SolverOptions& opts = {});

/// Karcher (Fréchet) mean of SPD matrices under the affine-invariant metric:
///   S <- S^{1/2} exp(eta * sum_i w_i log(S^{-1/2} C_i S^{-1/2})) S^{1/2},
/// eta = 1 with step halving whenever the gradient-norm residual increases.
/// Residual is || sum_i w_i log(S^{-1/2} C_i S^{-1/2}) ||_F.
[[nodiscard]] SpdMeanResult karcher_mean_spd(const std::vector<SpdMatrix>& mats,
                                             const std::vector<double>& weights,
                                             const SolverOptions& opts = {});

/// Precision-weighted location estimate from per-observation covariances:
///   theta = (sum_i C_i^{-1})^{-1} (sum_i C_i^{-1} mu_i),
/// returned together with its covariance (sum_i C_i^{-1})^{-1}.
[[nodiscard]] Gaussian precision_weighted_mean(const std::vector<Vec>& means,
                                               const std::vector<SpdMatrix>& covs);

} // namespace sig
