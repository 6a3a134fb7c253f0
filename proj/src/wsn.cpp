#include "sig/wsn.hpp"

#include "sig/barycenter.hpp"
#include "sig/errors.hpp"
#include "sig/io.hpp"
#include "sig/kernels.hpp"
#include "sig/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace sig {

namespace {
constexpr std::size_t kMaxRedraws = 1000;
} // namespace

WsnConfig::WsnConfig()
    : reliable_cov(SpdMatrix(Mat(0.1 * Mat::Identity(2, 2)))),
      unreliable_cov(SpdMatrix(Mat(10.0 * Mat::Identity(2, 2)))),
      unreliable_bias(Vec::Constant(2, 5.0)),
      truth(Vec::Zero(2)) {}

void WsnConfig::validate() const {
    if (!(lambda > 0.0)) {
        throw DomainError("intensity must be positive");
    }
    if (r_grid.empty() || !std::is_sorted(r_grid.begin(), r_grid.end()) ||
        std::adjacent_find(r_grid.begin(), r_grid.end()) != r_grid.end() ||
        !(r_grid.front() > 0.0)) {
        throw DomainError("window grid must be strictly increasing and positive");
    }
    if (!(reliable_fraction > 0.0) || !(reliable_fraction < 1.0)) {
        throw DomainError("reliable fraction must lie strictly between zero and one");
    }
    if (trials == 0) {
        throw DomainError("need at least one trial");
    }
    const auto d = truth.size();
    if (reliable_cov.dim() != d || unreliable_cov.dim() != d ||
        unreliable_bias.size() != d) {
        throw DimensionMismatch("truth, biases, and covariances must share one dimension");
    }
}

MseTable run_wsn_experiment(const WsnConfig& cfg, std::uint64_t seed, int threads) {
    cfg.validate();
    const auto d = static_cast<std::size_t>(cfg.truth.size());
    const Mat reliable_root = detail::sym_sqrt(cfg.reliable_cov.mat());
    const Mat unreliable_root = detail::sym_sqrt(cfg.unreliable_cov.mat());

    MseTable table;
    for (const double r : cfg.r_grid) {
        PppConfig ppp;
        ppp.window = Window{r};
        ppp.intensity = cfg.lambda;
        const std::uint64_t exp_id =
            experiment_id(("wsn R=" + fmt_g17(r)).c_str());

        std::vector<double> eu_err(cfg.trials), fr_err(cfg.trials);
        std::vector<std::size_t> redraws(cfg.trials, 0);

        parallel_for(
            cfg.trials,
            [&](std::size_t i) {
                std::vector<Point2> points;
                std::uint64_t trial_id = 0;
                std::size_t attempt = 0;
                for (;;) {
                    trial_id = i + attempt * cfg.trials;
                    points = sample_ppp(ppp, FieldStreams{seed, exp_id, trial_id});
                    if (!points.empty()) {
                        break;
                    }
                    if (++attempt > kMaxRedraws) {
                        throw NoConvergence("window stayed empty after repeated redraws");
                    }
                }
                redraws[i] = attempt;
                // Classes and mark means are drawn in lexicographic point
                // order so the trial is independent of sampling order.
                std::sort(points.begin(), points.end(), [](const Point2& a, const Point2& b) {
                    return a.x != b.x ? a.x < b.x : a.y < b.y;
                });
                const std::size_t n = points.size();

                RngStream classes(seed, exp_id, trial_id, role::kReliability);
                std::vector<bool> reliable(n);
                for (std::size_t p = 0; p < n; ++p) {
                    reliable[p] = classes.uniform() < cfg.reliable_fraction;
                }

                RngStream means(seed, exp_id, trial_id, role::kMarkMeans);
                std::vector<double> z(n * d);
                means.fill_normals(z.data(), z.size());

                std::vector<Vec> mu(n);
                std::vector<SpdMatrix> covs;
                covs.reserve(n);
                Vec euclid = Vec::Zero(static_cast<Eigen::Index>(d));
                for (std::size_t p = 0; p < n; ++p) {
                    const Eigen::Map<const Vec> zp(z.data() + p * d,
                                                   static_cast<Eigen::Index>(d));
                    if (reliable[p]) {
                        mu[p] = cfg.truth + reliable_root * zp;
                        covs.push_back(cfg.reliable_cov);
                    } else {
                        mu[p] = cfg.truth + cfg.unreliable_bias + unreliable_root * zp;
                        covs.push_back(cfg.unreliable_cov);
                    }
                    euclid += mu[p];
                }
                euclid /= static_cast<double>(n);
                const Gaussian weighted = precision_weighted_mean(mu, covs);

                eu_err[i] = (euclid - cfg.truth).squaredNorm();
                fr_err[i] = (weighted.mean - cfg.truth).squaredNorm();
            },
            threads);

        MseRow row;
        row.half_width = r;
        row.trials = cfg.trials;
        const auto n = static_cast<double>(cfg.trials);
        row.euclidean_mse = kern::active().sum(eu_err.data(), cfg.trials) / n;
        row.frechet_mse = kern::active().sum(fr_err.data(), cfg.trials) / n;
        if (cfg.trials > 1) {
            row.euclidean_se = std::sqrt(
                kern::active().sum_sq_dev(eu_err.data(), cfg.trials, row.euclidean_mse) /
                (n - 1.0) / n);
            row.frechet_se = std::sqrt(
                kern::active().sum_sq_dev(fr_err.data(), cfg.trials, row.frechet_mse) /
                (n - 1.0) / n);
        }
        for (std::size_t i = 0; i < cfg.trials; ++i) {
            row.empty_resampled += redraws[i];
            if (fr_err[i] < eu_err[i]) {
                ++row.frechet_wins;
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

double required_region_size(double gamma_trace, double lambda, double epsilon) {
    if (!(gamma_trace > 0.0) || !(lambda > 0.0) || !(epsilon > 0.0)) {
        throw DomainError("trace, intensity, and target must be positive");
    }
    return gamma_trace / (lambda * epsilon);
}

void write_wsn_csv(const std::string& path, const MseTable& table) {
    std::ofstream out = open_out(path);
    out << "R,euclidean_mse,frechet_mse,trials,empty_resampled\n";
    for (const MseRow& r : table.rows) {
        out << fmt_g17(r.half_width) << ',' << fmt_g17(r.euclidean_mse) << ','
            << fmt_g17(r.frechet_mse) << ',' << r.trials << ',' << r.empty_resampled
            << '\n';
    }
    if (!out) {
        throw IoError("failed while writing " + path);
    }
}

} // namespace sig
