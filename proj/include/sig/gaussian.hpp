#pragma once

#include <utility>

#include "sig/spd.hpp"

namespace sig {

/// Which geometry distances and barycenters are computed in.
enum class MetricKind {
    FisherRao,       ///< information metric; closed form on special slices only
    Wasserstein2,    ///< optimal-transport metric; closed form for Gaussians
    AffineInvariant, ///< Riemannian metric on covariance matrices alone
};

/// A multivariate normal distribution N(mean, cov).
struct Gaussian {
    Vec mean;
    SpdMatrix cov;

    Gaussian(Vec mean_, SpdMatrix cov_) : mean(std::move(mean_)), cov(std::move(cov_)) {
        if (mean.size() != cov.dim()) {
            throw DimensionMismatch("Gaussian: mean/cov dimension mismatch");
        }
    }

    [[nodiscard]] int dim() const { return static_cast<int>(mean.size()); }
};

} // namespace sig
