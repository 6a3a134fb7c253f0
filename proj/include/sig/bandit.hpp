#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "sig/field.hpp"
#include "sig/gaussian.hpp"

namespace sig {

/// One Gaussian reward arm.
struct ArmSpec {
    double mean = 0.0;
    double variance = 1.0;
};

/// Finite-armed Gaussian environment. locations, when nonempty, place the
/// arms in the plane (one point per arm) for field-embedded variants; the
/// quantitative studies use the fixed ten-arm benchmark.
struct BanditEnv {
    std::vector<ArmSpec> arms;
    std::uint64_t horizon = 3000;
    std::vector<Point2> locations;

    /// K >= 2, positive finite variances, horizon >= K, locations empty or
    /// one per arm (DomainError otherwise).
    void validate() const;

    /// Index of the highest mean; ties resolve to the lowest index.
    [[nodiscard]] std::size_t best_arm() const;

    /// Gap of arm k: best mean minus its mean (zero for the best arm).
    [[nodiscard]] double gap(std::size_t k) const;

    [[nodiscard]] double max_gap() const;
};

/// The ten-arm heteroscedastic benchmark: three high-mean/high-variance arms
/// (means evenly spaced on [0.87, 0.90], variance 2.25), four mid-mean
/// low-variance arms (means on [0.72, 0.75], variance 0.01), three low-mean
/// low-variance arms (means on [0.4, 0.5], variance 0.01); horizon 3000.
[[nodiscard]] BanditEnv make_reference_env();

/// Streaming per-arm sufficient statistics (Welford update).
struct ArmStatistics {
    std::uint64_t pulls = 0;
    double mean = 0.0;
    double m2 = 0.0; ///< sum of squared deviations from the running mean

    void observe(double reward);

    /// Unbiased sample variance; defined (and used) only for pulls >= 2.
    [[nodiscard]] double variance_unbiased() const;
};

/// Barycentric policy knobs. epsilon is the candidate-neighborhood radius in
/// metric units; with adaptive_epsilon the radius is infinite for the first
/// 2K rounds and then tracks 2x the sample standard deviation of the current
/// arm-to-belief distances. beta scales the optimism term. The metric acts
/// on one-dimensional Gaussians; FisherRao is selectable but raises
/// UnsupportedGeodesic whenever both mean and variance differ.
struct FrechetUcbConfig {
    double epsilon = std::numeric_limits<double>::infinity();
    bool adaptive_epsilon = true;
    std::function<double(std::uint64_t)> beta = [](std::uint64_t) { return 1.0; };
    MetricKind metric = MetricKind::Wasserstein2;
    double variance_floor = 1e-6;
};

/// argmax_k { mean_k + sqrt(2 ln t / pulls_k) }, ties to the lowest index.
/// Every arm must have been pulled (DomainError otherwise).
[[nodiscard]] std::size_t classical_ucb_step(const std::vector<ArmStatistics>& stats,
                                             std::uint64_t t);

/// Precision-weighted aggregate belief: weights 1/max(variance, floor)
/// (arms with fewer than two pulls sit at the floor), mean the weighted
/// average, variance the inverse aggregate precision. One-dimensional.
[[nodiscard]] Gaussian frechet_belief(const std::vector<ArmStatistics>& stats,
                                      const FrechetUcbConfig& cfg);

/// One decision of the barycentric policy: build the aggregate belief,
/// keep the arms whose belief lies within epsilon of it (all arms when the
/// neighborhood is empty), and return
///   argmin_k { d^2(arm_k, belief) - beta(t) * (mean_k + sqrt(2 ln t / pulls_k)) },
/// ties to the lowest index.
[[nodiscard]] std::size_t frechet_ucb_step(const std::vector<ArmStatistics>& stats,
                                           const FrechetUcbConfig& cfg, std::uint64_t t);

enum class PolicyKind { ClassicalUcb, FrechetUcb };

[[nodiscard]] std::string policy_name(PolicyKind p);

/// Cumulative-regret paths over independent trials.
struct RegretTrace {
    std::size_t n_arms = 0;
    std::vector<std::vector<double>> per_trial;        ///< trials x horizon
    std::vector<double> mean_path;                     ///< length horizon
    std::vector<double> ci95_half_width;               ///< length horizon
    std::vector<std::vector<std::uint16_t>> selections; ///< trials x horizon

    /// Mean pull counts per arm over rounds (from_round, horizon], 1-based.
    [[nodiscard]] std::vector<double> mean_pulls_after(std::uint64_t from_round) const;
};

/// Plays the policy for env.horizon rounds per trial: rounds 1..K pull each
/// arm once in index order, then the policy decides. Rewards are
/// mean_k + sd_k * z with one standard normal per round from the trial's
/// reward substream, so shifting all means shifts rewards identically.
/// Regret accumulates true mean gaps (pseudo-regret).
[[nodiscard]] RegretTrace run_policy(const BanditEnv& env, PolicyKind policy,
                                     const FrechetUcbConfig& cfg, std::size_t trials,
                                     std::uint64_t seed, int threads = 0);

/// The two-term regret ceiling: inside the epsilon-neighborhood of the true
/// precision-weighted belief each suboptimal arm contributes 8 ln(horizon) /
/// gap; outside it an arm is (pessimistically) charged every round,
/// contributing gap * horizon.
struct RegretBoundSplit {
    double inner = 0.0;
    double outer = 0.0;
};

[[nodiscard]] RegretBoundSplit regret_bound_decomposition(const BanditEnv& env,
                                                          double epsilon,
                                                          std::uint64_t horizon);

/// Writes "round,mean_cum_regret,ci95".
void write_regret_csv(const std::string& path, const RegretTrace& trace);

} // namespace sig
