#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sig/field.hpp"
#include "sig/spd.hpp"

namespace sig {

/// Two-class sensor field: each point is reliable with probability
/// reliable_fraction (mark mean drawn around the truth with the reliable
/// covariance) and otherwise unreliable (mark mean drawn around
/// truth + unreliable_bias with the unreliable covariance). Both aggregation
/// rules see every sensor's class covariance.
struct WsnConfig {
    double lambda = 0.1;
    std::vector<double> r_grid = {5.0, 10.0, 15.0, 20.0};
    double reliable_fraction = 0.7;
    SpdMatrix reliable_cov;
    SpdMatrix unreliable_cov;
    Vec unreliable_bias;
    std::size_t trials = 500;
    Vec truth;

    WsnConfig();

    /// Positive intensity, strictly increasing window grid, fraction in
    /// (0,1), at least one trial (DomainError otherwise); truth, bias, and
    /// covariances must share one dimension (DimensionMismatch).
    void validate() const;
};

struct MseRow {
    double half_width = 0.0;
    double euclidean_mse = 0.0;
    double frechet_mse = 0.0;
    std::size_t trials = 0;
    std::size_t empty_resampled = 0;
    std::size_t frechet_wins = 0; ///< trials where the weighted error is strictly smaller
    double euclidean_se = 0.0;    ///< standard error of euclidean_mse
    double frechet_se = 0.0;      ///< standard error of frechet_mse
};

struct MseTable {
    std::vector<MseRow> rows; ///< one per window in r_grid order
};

/// Per trial: sample the point field, assign classes, draw mark means, and
/// estimate the truth two ways — the plain average of mark means and the
/// precision-weighted combination using each sensor's class covariance.
/// MSE is the trial average of the squared estimator error. Empty windows
/// are redrawn from fresh substreams and counted.
[[nodiscard]] MseTable run_wsn_experiment(const WsnConfig& cfg, std::uint64_t seed,
                                          int threads = 0);

/// Window area for which the mean-error bound tr(Gamma)/(lambda*area) meets
/// the target: area = gamma_trace/(lambda*epsilon). Raises DomainError for
/// nonpositive arguments.
[[nodiscard]] double required_region_size(double gamma_trace, double lambda,
                                          double epsilon);

/// Writes "R,euclidean_mse,frechet_mse,trials,empty_resampled".
void write_wsn_csv(const std::string& path, const MseTable& table);

} // namespace sig
