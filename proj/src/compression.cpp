#include "sig/compression.hpp"

#include "sig/errors.hpp"
#include "sig/io.hpp"
#include "sig/kernels.hpp"
#include "sig/metrics.hpp"
#include "sig/parallel.hpp"

#include <cmath>

namespace sig {

namespace {
constexpr std::size_t kMaxRedraws = 1000;
} // namespace

void CompressionSpec::validate() const {
    if (!(dense_intensity > 0.0) || !(sparse_intensity > 0.0)) {
        throw DomainError("intensities must be positive");
    }
    if (!(dense_intensity > sparse_intensity)) {
        throw DomainError("the dense intensity must exceed the sparse one");
    }
    if (!(threshold > 0.0)) {
        throw DomainError("distortion threshold must be positive");
    }
    if (!(window.area() > 0.0)) {
        throw DomainError("window area must be positive");
    }
}

double semantic_distortion(const MarkedField& dense, const MarkedField& sparse,
                           MetricKind metric, const SolverOptions& opts) {
    const Gaussian a = empirical_frechet_mean(dense, metric, opts);
    const Gaussian b = empirical_frechet_mean(sparse, metric, opts);
    return distance_sq(a, b, metric);
}

double semantic_similarity(const MarkedField& a, const MarkedField& b, MetricKind metric,
                           const SolverOptions& opts) {
    return semantic_distortion(a, b, metric, opts);
}

double expected_distortion_bound(const SpdMatrix& gamma, const CompressionSpec& spec) {
    spec.validate();
    const double area = spec.window.area();
    return gamma.trace() *
           (1.0 / (spec.dense_intensity * area) + 1.0 / (spec.sparse_intensity * area));
}

double min_sparse_intensity(const SpdMatrix& gamma, double lambda, const Window& window,
                            double threshold) {
    if (!(lambda > 0.0)) {
        throw DomainError("dense intensity must be positive");
    }
    const double area = window.area();
    if (!(area > 0.0)) {
        throw DomainError("window area must be positive");
    }
    const double floor = gamma.trace() / (lambda * area);
    if (!(threshold > floor)) {
        throw InfeasibleThreshold(
            "threshold must exceed the dense field's error floor " + fmt_g17(floor));
    }
    return (gamma.trace() / area) / (threshold - floor);
}

CompressionRun run_compression_protocol(const MarkModel& model, const CompressionSpec& spec,
                                        std::size_t trials, std::uint64_t seed,
                                        SparseScheme scheme, int threads) {
    spec.validate();
    if (trials == 0) {
        throw DomainError("protocol needs at least one trial");
    }
    PppConfig dense_cfg;
    dense_cfg.window = spec.window;
    dense_cfg.intensity = spec.dense_intensity;
    PppConfig sparse_cfg = dense_cfg;
    sparse_cfg.intensity = spec.sparse_intensity;
    const double keep = spec.sparse_intensity / spec.dense_intensity;
    const std::uint64_t exp_id = experiment_id("semantic compression");

    CompressionRun run;
    run.scheme = scheme;
    run.rows.resize(trials);
    std::vector<double> distortion(trials);
    std::vector<std::size_t> redraws(trials, 0);

    parallel_for(
        trials,
        [&](std::size_t i) {
            MarkedField dense, sparse;
            std::size_t attempt = 0;
            for (;;) {
                // Pair (2j, 2j+1) of trial substreams: the dense and sparse
                // fields never share draws, and redraws shift both together.
                const std::uint64_t j = i + attempt * trials;
                const FieldStreams dense_id{seed, exp_id, 2 * j};
                dense = sample_marked_field(dense_cfg, model, dense_id);
                if (scheme == SparseScheme::IndependentField) {
                    const FieldStreams sparse_id{seed, exp_id, 2 * j + 1};
                    sparse = sample_marked_field(sparse_cfg, model, sparse_id);
                } else {
                    // Keep each dense point independently with probability
                    // sparse/dense; marks travel with their points.
                    RngStream thin(seed, exp_id, 2 * j + 1, role::kThinning);
                    sparse = MarkedField{dense.window, {}, {}};
                    for (std::size_t p = 0; p < dense.size(); ++p) {
                        const bool kept = thin.uniform() < keep;
                        if (kept) {
                            sparse.points.push_back(dense.points[p]);
                            sparse.marks.push_back(dense.marks[p]);
                        }
                    }
                }
                if (!dense.empty() && !sparse.empty()) {
                    break;
                }
                if (++attempt > kMaxRedraws) {
                    throw NoConvergence("field pair stayed empty after repeated redraws");
                }
            }
            redraws[i] = attempt;
            distortion[i] = semantic_distortion(dense, sparse, spec.metric);
            run.rows[i] = {i, dense.size(), sparse.size(), distortion[i]};
        },
        threads);

    for (const std::size_t r : redraws) {
        run.resampled += r;
    }
    const auto n = static_cast<double>(trials);
    const double mean = kern::active().sum(distortion.data(), trials) / n;
    const double sd =
        trials > 1
            ? std::sqrt(kern::active().sum_sq_dev(distortion.data(), trials, mean) / (n - 1.0))
            : 0.0;

    BoundReport& rep = run.report;
    rep.bound_name = scheme == SparseScheme::IndependentField
                         ? "expected_distortion"
                         : "expected_distortion_thinning";
    rep.t_or_size = spec.sparse_intensity;
    rep.analytic = expected_distortion_bound(model.mean_dispersion, spec);
    rep.empirical = mean;
    rep.trials = trials;
    rep.slack = rep.analytic - rep.empirical;
    rep.mc_slack = 3.0 * sd / std::sqrt(n);
    rep.dominance = rep.empirical <= rep.analytic + rep.mc_slack;

    const auto within = kern::active().count_ge(distortion.data(), trials, spec.threshold);
    run.fraction_within_threshold = 1.0 - static_cast<double>(within) / n;
    return run;
}

void write_compression_csv(const std::string& path, const CompressionRun& run) {
    std::ofstream out = open_out(path);
    out << "trial,n_dense,n_sparse,distortion\n";
    for (const CompressionTrialRow& r : run.rows) {
        out << r.trial << ',' << r.n_dense << ',' << r.n_sparse << ','
            << fmt_g17(r.distortion) << '\n';
    }
    if (!out) {
        throw IoError("failed while writing " + path);
    }
}

} // namespace sig
