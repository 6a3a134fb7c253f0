#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sig/bounds.hpp"
#include "sig/field.hpp"

namespace sig {

/// One analytic-vs-empirical comparison. `slack` is the signed margin
/// analytic - empirical; `mc_slack` is the tolerance the verdict used
/// (three standard errors of the Monte-Carlo estimate, plus a stated model
/// allowance for approximation rows). For exceedance rows the verdict is
/// one-sided (empirical <= analytic + mc_slack); rows whose name ends in
/// "_mean" are two-sided (|empirical - analytic| <= mc_slack).
struct BoundReport {
    std::string bound_name;
    double t_or_size = 0.0; ///< threshold t, or window mean count, as applicable
    double analytic = 0.0;
    double empirical = 0.0;
    std::size_t trials = 0;
    double slack = 0.0;    ///< analytic - empirical
    double mc_slack = 0.0; ///< Monte-Carlo tolerance behind `dominance`
    bool dominance = false;
};

/// Ordinary least squares on (log size, log value).
struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
    std::vector<double> sizes;  ///< abscissae (mean point counts)
    std::vector<double> values; ///< measured means / variances
};

/// Fits log(values) ~ slope * log(sizes) + intercept. Requires at least two
/// strictly positive points (DomainError otherwise).
[[nodiscard]] RateFit fit_loglog(const std::vector<double>& sizes,
                                 const std::vector<double>& values);

/// Samples the squared distance between a random mark distribution and the
/// population barycenter by exact transformation of standard normals, then
/// compares tail frequencies against the Gaussian-chaos and the one-sided
/// Chebyshev bound at thresholds mean + t over t_grid (empty grid: the
/// default t = mean * {0.25, 0.5, 1, 2, 4}, spanning the regime where the
/// bounds are informative without astronomically rare events).
/// Returns interleaved rows "tail_chaos_*" and "tail_cantelli_*".
[[nodiscard]] std::vector<BoundReport> validate_tail(const SpdMatrix& sigma,
                                                     const SpdMatrix& gamma,
                                                     MetricKind metric,
                                                     std::size_t trials,
                                                     std::uint64_t seed,
                                                     const std::vector<double>& t_grid = {});

/// Per-window check of the mark-mean average around the population mean.
struct CltCheck {
    double half_width = 0.0;
    double mean_count = 0.0; ///< lambda * |B|
    Mat scaled_cov;          ///< empirical covariance of sqrt(N) * (mean error)
    double frob_rel_err = 0.0;
};

struct CltMseReport {
    std::vector<BoundReport> mse_rows; ///< "window_mse", one per window
    std::vector<CltCheck> clt_checks;
    RateFit mse_rate;                    ///< empirical MSE vs mean count
    std::vector<std::size_t> resampled;  ///< empty-window redraws per window
};

/// Monte-Carlo study of the empirical mean of mark means over a growing
/// window: MSE against the closed-form bound tr(Gamma)/(lambda |B|), decay
/// rate of the MSE, and the scaled-error covariance against the dispersion.
/// Empty windows are redrawn from fresh trial substreams and counted.
[[nodiscard]] CltMseReport validate_clt_and_mse(const MarkModel& model, double lambda,
                                                const std::vector<double>& r_grid,
                                                std::size_t trials, std::uint64_t seed,
                                                int threads = 0);

struct PalmReport {
    BoundReport typical_fr; ///< mean squared information distance of the origin mark
    BoundReport typical_w2; ///< mean squared transport distance of the origin mark
    RateFit mean_rate_fr, var_rate_fr;
    RateFit mean_rate_w2, var_rate_w2;
    std::vector<std::size_t> resampled; ///< empty-background redraws per window
};

/// Two-part Palm study. (a) The mark attached at the origin of the Slivnyak
/// construction has mean squared distances tr(Sigma^{-1} Gamma) and
/// tr(Gamma) from the barycenter; verified from typical_draws exact draws
/// that replay the same (trial, role) substreams palm_field uses. (b) The
/// squared deviation of the background empirical mean decays like 1/(lambda
/// |B|) in mean and 1/(lambda |B|)^2 in variance; fitted over r_grid.
[[nodiscard]] PalmReport validate_palm_deviation(const MarkModel& model, double lambda,
                                                 const std::vector<double>& r_grid,
                                                 std::size_t typical_draws,
                                                 std::size_t trials, std::uint64_t seed,
                                                 int threads = 0);

/// Random-count suite on one window:
///   - "mean_inv_count": E[1/N | N >= 1] against 1/(lambda |B| - 1)
///     (two-sided; slack adds a 2% approximation allowance),
///   - "conditional_cantelli_n<k>": exceedance of |mean error|^2 given
///     exactly k points against the conditional Chebyshev bound, for each
///     k in n_grid, thresholds mean * {1, 1.5, 2, 4},
///   - "meta_cantelli": the same bound with the random N replaced by its
///     mean — a heuristic whose empirical behaviour is recorded either way.
[[nodiscard]] std::vector<BoundReport> validate_count_bounds(
    const SpdMatrix& gamma, double lambda, const Window& window,
    const std::vector<std::uint64_t>& n_grid, std::size_t trials, std::uint64_t seed);

/// Writes "bound_name,t_or_size,analytic,empirical,trials,slack,dominance"
/// with 17-significant-digit floats.
void write_bound_reports_csv(const std::string& path,
                             const std::vector<BoundReport>& rows);

} // namespace sig
