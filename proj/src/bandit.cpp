#include "sig/bandit.hpp"

#include "sig/errors.hpp"
#include "sig/io.hpp"
#include "sig/kernels.hpp"
#include "sig/metrics.hpp"
#include "sig/parallel.hpp"
#include "sig/rng.hpp"

#include <cmath>

namespace sig {

void BanditEnv::validate() const {
    if (arms.size() < 2) {
        throw DomainError("environment needs at least two arms");
    }
    for (const ArmSpec& a : arms) {
        if (!std::isfinite(a.mean) || !(a.variance > 0.0) || !std::isfinite(a.variance)) {
            throw DomainError("arm parameters must be finite with positive variance");
        }
    }
    if (horizon < arms.size()) {
        throw DomainError("horizon must cover one initialization pull per arm");
    }
    if (!locations.empty() && locations.size() != arms.size()) {
        throw DomainError("locations must be absent or one per arm");
    }
}

std::size_t BanditEnv::best_arm() const {
    std::size_t best = 0;
    for (std::size_t k = 1; k < arms.size(); ++k) {
        if (arms[k].mean > arms[best].mean) {
            best = k;
        }
    }
    return best;
}

double BanditEnv::gap(std::size_t k) const {
    if (k >= arms.size()) {
        throw DomainError("arm index out of range");
    }
    return arms[best_arm()].mean - arms[k].mean;
}

double BanditEnv::max_gap() const {
    double g = 0.0;
    for (std::size_t k = 0; k < arms.size(); ++k) {
        g = std::max(g, gap(k));
    }
    return g;
}

BanditEnv make_reference_env() {
    auto spaced = [](double lo, double hi, std::size_t n, std::size_t i) {
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    BanditEnv env;
    env.horizon = 3000;
    for (std::size_t i = 0; i < 3; ++i) {
        env.arms.push_back({spaced(0.87, 0.90, 3, i), 2.25});
    }
    for (std::size_t i = 0; i < 4; ++i) {
        env.arms.push_back({spaced(0.72, 0.75, 4, i), 0.01});
    }
    for (std::size_t i = 0; i < 3; ++i) {
        env.arms.push_back({spaced(0.4, 0.5, 3, i), 0.01});
    }
    env.validate();
    return env;
}

void ArmStatistics::observe(double reward) {
    ++pulls;
    const double delta = reward - mean;
    mean += delta / static_cast<double>(pulls);
    m2 += delta * (reward - mean);
}

double ArmStatistics::variance_unbiased() const {
    if (pulls < 2) {
        throw DomainError("unbiased variance needs at least two pulls");
    }
    return m2 / static_cast<double>(pulls - 1);
}

namespace {

double ucb_index(const ArmStatistics& s, std::uint64_t t) {
    return s.mean + std::sqrt(2.0 * std::log(static_cast<double>(t)) /
                              static_cast<double>(s.pulls));
}

/// Working variance of an arm belief: unbiased when defined, floored always.
double floored_variance(const ArmStatistics& s, double floor) {
    const double v = s.pulls >= 2 ? s.variance_unbiased() : 0.0;
    return std::max(v, floor);
}

/// Squared metric distance between one-dimensional Gaussians through the
/// real metric implementations.
double belief_distance_sq(double mean_a, double var_a, double mean_b, double var_b,
                          MetricKind metric) {
    Mat ca(1, 1), cb(1, 1);
    ca(0, 0) = var_a;
    cb(0, 0) = var_b;
    Vec ma(1), mb(1);
    ma(0) = mean_a;
    mb(0) = mean_b;
    return distance_sq(Gaussian(ma, SpdMatrix(ca)), Gaussian(mb, SpdMatrix(cb)), metric);
}

void require_initialized(const std::vector<ArmStatistics>& stats) {
    if (stats.size() < 2) {
        throw DomainError("need statistics for at least two arms");
    }
    for (const ArmStatistics& s : stats) {
        if (s.pulls == 0) {
            throw DomainError("every arm must be pulled once before policy steps");
        }
    }
}

} // namespace

std::size_t classical_ucb_step(const std::vector<ArmStatistics>& stats, std::uint64_t t) {
    require_initialized(stats);
    std::size_t best = 0;
    double best_val = ucb_index(stats[0], t);
    for (std::size_t k = 1; k < stats.size(); ++k) {
        const double v = ucb_index(stats[k], t);
        if (v > best_val) {
            best = k;
            best_val = v;
        }
    }
    return best;
}

Gaussian frechet_belief(const std::vector<ArmStatistics>& stats,
                        const FrechetUcbConfig& cfg) {
    require_initialized(stats);
    double wsum = 0.0, wm = 0.0;
    for (const ArmStatistics& s : stats) {
        const double w = 1.0 / floored_variance(s, cfg.variance_floor);
        wsum += w;
        wm += w * s.mean;
    }
    Vec mean(1);
    mean(0) = wm / wsum;
    Mat cov(1, 1);
    cov(0, 0) = 1.0 / wsum;
    return {std::move(mean), SpdMatrix(cov)};
}

std::size_t frechet_ucb_step(const std::vector<ArmStatistics>& stats,
                             const FrechetUcbConfig& cfg, std::uint64_t t) {
    require_initialized(stats);
    const Gaussian belief = frechet_belief(stats, cfg);
    const double belief_mean = belief.mean(0);
    const double belief_var = belief.cov(0, 0);
    const std::size_t k_arms = stats.size();

    std::vector<double> d2(k_arms);
    for (std::size_t k = 0; k < k_arms; ++k) {
        d2[k] = belief_distance_sq(stats[k].mean, floored_variance(stats[k], cfg.variance_floor),
                                   belief_mean, belief_var, cfg.metric);
    }

    double eps = cfg.epsilon;
    if (cfg.adaptive_epsilon && t > 2 * k_arms) {
        // Radius tracking the spread of the current arm-to-belief distances.
        double mean_d = 0.0;
        for (const double v : d2) {
            mean_d += std::sqrt(v);
        }
        mean_d /= static_cast<double>(k_arms);
        double ss = 0.0;
        for (const double v : d2) {
            const double dev = std::sqrt(v) - mean_d;
            ss += dev * dev;
        }
        eps = 2.0 * std::sqrt(ss / static_cast<double>(k_arms - 1));
    }

    bool any = false;
    for (std::size_t k = 0; k < k_arms; ++k) {
        if (std::sqrt(d2[k]) <= eps) {
            any = true;
            break;
        }
    }

    const double beta = cfg.beta(t);
    if (!(beta > 0.0)) {
        throw DomainError("exploration scale beta(t) must be positive");
    }
    std::size_t best = k_arms;
    double best_val = 0.0;
    for (std::size_t k = 0; k < k_arms; ++k) {
        if (any && std::sqrt(d2[k]) > eps) {
            continue;
        }
        const double v = d2[k] - beta * ucb_index(stats[k], t);
        if (best == k_arms || v < best_val) {
            best = k;
            best_val = v;
        }
    }
    return best;
}

std::string policy_name(PolicyKind p) {
    return p == PolicyKind::ClassicalUcb ? "classical_ucb" : "frechet_ucb";
}

std::vector<double> RegretTrace::mean_pulls_after(std::uint64_t from_round) const {
    std::vector<double> counts(n_arms, 0.0);
    if (selections.empty()) {
        return counts;
    }
    for (const auto& trial : selections) {
        for (std::size_t t = from_round; t < trial.size(); ++t) {
            counts[trial[t]] += 1.0;
        }
    }
    for (double& c : counts) {
        c /= static_cast<double>(selections.size());
    }
    return counts;
}

RegretTrace run_policy(const BanditEnv& env, PolicyKind policy,
                       const FrechetUcbConfig& cfg, std::size_t trials,
                       std::uint64_t seed, int threads) {
    env.validate();
    if (trials == 0) {
        throw DomainError("need at least one trial");
    }
    const std::size_t k_arms = env.arms.size();
    const auto horizon = static_cast<std::size_t>(env.horizon);
    const std::size_t best = env.best_arm();
    const double best_mean = env.arms[best].mean;
    const std::uint64_t exp_id =
        experiment_id(("bandit " + policy_name(policy)).c_str());

    RegretTrace trace;
    trace.n_arms = k_arms;
    trace.per_trial.assign(trials, std::vector<double>(horizon, 0.0));
    trace.selections.assign(trials, std::vector<std::uint16_t>(horizon, 0));

    parallel_for(
        trials,
        [&](std::size_t i) {
            RngStream rewards(seed, exp_id, i, role::kRewards);
            std::vector<ArmStatistics> stats(k_arms);
            double cum = 0.0;
            for (std::size_t t = 1; t <= horizon; ++t) {
                std::size_t arm;
                if (t <= k_arms) {
                    arm = t - 1;
                } else if (policy == PolicyKind::ClassicalUcb) {
                    arm = classical_ucb_step(stats, t);
                } else {
                    arm = frechet_ucb_step(stats, cfg, t);
                }
                const ArmSpec& spec = env.arms[arm];
                const double reward = spec.mean + std::sqrt(spec.variance) * rewards.normal();
                stats[arm].observe(reward);
                cum += best_mean - spec.mean;
                trace.per_trial[i][t - 1] = cum;
                trace.selections[i][t - 1] = static_cast<std::uint16_t>(arm);
            }
        },
        threads);

    trace.mean_path.resize(horizon);
    trace.ci95_half_width.resize(horizon);
    std::vector<double> column(trials);
    for (std::size_t t = 0; t < horizon; ++t) {
        for (std::size_t i = 0; i < trials; ++i) {
            column[i] = trace.per_trial[i][t];
        }
        const double mean =
            kern::active().sum(column.data(), trials) / static_cast<double>(trials);
        trace.mean_path[t] = mean;
        if (trials > 1) {
            const double var = kern::active().sum_sq_dev(column.data(), trials, mean) /
                               static_cast<double>(trials - 1);
            trace.ci95_half_width[t] =
                1.96 * std::sqrt(var / static_cast<double>(trials));
        }
    }
    return trace;
}

RegretBoundSplit regret_bound_decomposition(const BanditEnv& env, double epsilon,
                                            std::uint64_t horizon) {
    env.validate();
    if (horizon < 2) {
        throw DomainError("horizon must be at least two");
    }
    // True aggregate belief from the declared arm parameters.
    double wsum = 0.0, wm = 0.0;
    for (const ArmSpec& a : env.arms) {
        const double w = 1.0 / a.variance;
        wsum += w;
        wm += w * a.mean;
    }
    const double belief_mean = wm / wsum;
    const double belief_var = 1.0 / wsum;

    const double log_t = std::log(static_cast<double>(horizon));
    RegretBoundSplit split;
    for (std::size_t k = 0; k < env.arms.size(); ++k) {
        const double gap = env.gap(k);
        const double d = std::sqrt(belief_distance_sq(env.arms[k].mean, env.arms[k].variance,
                                                      belief_mean, belief_var,
                                                      MetricKind::Wasserstein2));
        if (d <= epsilon) {
            if (gap > 0.0) {
                split.inner += 8.0 * log_t / gap;
            }
        } else {
            split.outer += gap * static_cast<double>(horizon);
        }
    }
    return split;
}

void write_regret_csv(const std::string& path, const RegretTrace& trace) {
    std::ofstream out = open_out(path);
    out << "round,mean_cum_regret,ci95\n";
    for (std::size_t t = 0; t < trace.mean_path.size(); ++t) {
        out << (t + 1) << ',' << fmt_g17(trace.mean_path[t]) << ','
            << fmt_g17(trace.ci95_half_width[t]) << '\n';
    }
    if (!out) {
        throw IoError("failed while writing " + path);
    }
}

} // namespace sig
