#include "sig/validators.hpp"

#include "sig/errors.hpp"
#include "sig/io.hpp"
#include "sig/kernels.hpp"
#include "sig/metrics.hpp"
#include "sig/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace sig {

namespace {

constexpr std::size_t kMaxRedraws = 1000;

/// Batch quadratic form out[i] = z_i' m z_i for packed d-dim rows of z.
/// d == 2 goes through the kernel table; other dimensions use a plain loop.
void batch_quadform(const double* z, std::size_t n, const Mat& m, double* out) {
    const auto d = static_cast<std::size_t>(m.rows());
    if (d == 2) {
        kern::active().quadform2(z, n, 0.0, 0.0, m(0, 0), m(0, 1), m(1, 1), out);
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::Map<const Vec> zi(z + i * d, static_cast<Eigen::Index>(d));
        out[i] = zi.dot(m * zi);
    }
}

double mean_of(const std::vector<double>& x) {
    if (x.empty()) {
        throw DomainError("mean of an empty sample");
    }
    return kern::active().sum(x.data(), x.size()) / static_cast<double>(x.size());
}

/// Standard error of the sample mean.
double se_of(const std::vector<double>& x, double mean) {
    if (x.size() < 2) {
        return 0.0;
    }
    const double ss = kern::active().sum_sq_dev(x.data(), x.size(), mean);
    const auto n = static_cast<double>(x.size());
    return std::sqrt(ss / (n - 1.0) / n);
}

/// Exceedance frequency with its three-standard-error slack. A frequency of
/// exactly zero gets the rule-of-three style slack 3/n.
struct Exceedance {
    double p_hat;
    double slack;
};

Exceedance exceedance(const std::vector<double>& x, double threshold) {
    const auto n = static_cast<double>(x.size());
    const auto hits = kern::active().count_ge(x.data(), x.size(), threshold);
    const double p = static_cast<double>(hits) / n;
    const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / n);
    return {p, se > 0.0 ? 3.0 * se : 3.0 / n};
}

BoundReport one_sided_row(std::string name, double t, double analytic,
                          const Exceedance& e, std::size_t trials) {
    BoundReport row;
    row.bound_name = std::move(name);
    row.t_or_size = t;
    row.analytic = analytic;
    row.empirical = e.p_hat;
    row.trials = trials;
    row.slack = analytic - e.p_hat;
    row.mc_slack = e.slack;
    row.dominance = e.p_hat <= analytic + e.slack;
    return row;
}

BoundReport two_sided_mean_row(std::string name, double t, double analytic,
                               const std::vector<double>& sample, double extra_tol) {
    BoundReport row;
    row.bound_name = std::move(name);
    row.t_or_size = t;
    row.analytic = analytic;
    row.empirical = mean_of(sample);
    row.trials = sample.size();
    row.slack = analytic - row.empirical;
    row.mc_slack = 3.0 * se_of(sample, row.empirical) + extra_tol;
    row.dominance = std::abs(row.empirical - row.analytic) <= row.mc_slack;
    return row;
}

Mat whitened_dispersion(const SpdMatrix& sigma, const SpdMatrix& gamma) {
    // S Sigma^{-1} S with S = Gamma^{1/2}: the matrix M for which the squared
    // information distance of a mark mean is z' M z, z standard normal.
    const Mat s = detail::sym_sqrt(gamma.mat());
    return s * sigma.mat().ldlt().solve(s);
}

} // namespace

RateFit fit_loglog(const std::vector<double>& sizes, const std::vector<double>& values) {
    if (sizes.size() != values.size()) {
        throw DimensionMismatch("rate fit needs matching abscissae and values");
    }
    if (sizes.size() < 2) {
        throw DomainError("rate fit needs at least two points");
    }
    RateFit fit;
    fit.sizes = sizes;
    fit.values = values;
    std::vector<double> lx(sizes.size()), ly(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (!(sizes[i] > 0.0) || !(values[i] > 0.0)) {
            throw DomainError("rate fit needs strictly positive data");
        }
        lx[i] = std::log(sizes[i]);
        ly[i] = std::log(values[i]);
    }
    const auto n = static_cast<double>(sizes.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw DomainError("rate fit abscissae are all equal");
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

std::vector<BoundReport> validate_tail(const SpdMatrix& sigma, const SpdMatrix& gamma,
                                       MetricKind metric, std::size_t trials,
                                       std::uint64_t seed,
                                       const std::vector<double>& t_grid) {
    if (trials == 0) {
        throw DomainError("tail validation needs at least one draw");
    }
    const bool fr = metric == MetricKind::FisherRao;
    if (!fr && metric != MetricKind::Wasserstein2) {
        throw Unsupported("tail validation covers the information and transport metrics");
    }
    const Mat m = fr ? whitened_dispersion(sigma, gamma) : gamma.mat();
    const auto d = static_cast<std::size_t>(m.rows());

    const std::uint64_t exp_id =
        experiment_id(fr ? "tail information" : "tail transport");
    std::vector<double> z(trials * d);
    RngStream stream(seed, exp_id, 0, role::kMarkMeans);
    stream.fill_normals(z.data(), z.size());
    std::vector<double> x(trials);
    batch_quadform(z.data(), trials, m, x.data());

    const double mean = m.trace();
    const double scale = fr ? fr_deviation_scale(sigma, gamma) : w2_deviation_scale(gamma);
    const char* chaos_name = fr ? "tail_chaos_fr" : "tail_chaos_w2";
    const char* cant_name = fr ? "tail_cantelli_fr" : "tail_cantelli_w2";

    std::vector<double> grid = t_grid;
    if (grid.empty()) {
        for (const double f : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            grid.push_back(mean * f);
        }
    }
    std::vector<BoundReport> rows;
    for (const double t : grid) {
        const Exceedance e = exceedance(x, mean + t);
        const double chaos =
            fr ? fr_tail_bound(sigma, gamma, t) : w2_tail_bound(gamma, t);
        rows.push_back(one_sided_row(chaos_name, t, chaos, e, trials));
        rows.push_back(one_sided_row(cant_name, t, cantelli_bound(t / scale), e, trials));
    }
    return rows;
}

CltMseReport validate_clt_and_mse(const MarkModel& model, double lambda,
                                  const std::vector<double>& r_grid, std::size_t trials,
                                  std::uint64_t seed, int threads) {
    if (trials == 0) {
        throw DomainError("window study needs at least one trial");
    }
    if (r_grid.empty()) {
        throw DomainError("window study needs at least one window");
    }
    const int d = model.dim();
    const SpdMatrix& gamma = model.mean_dispersion;

    CltMseReport report;
    std::vector<double> mean_counts, mse_values;

    for (const double r : r_grid) {
        const Window win{r};
        PppConfig cfg;
        cfg.window = win;
        cfg.intensity = lambda;
        const std::uint64_t exp_id =
            experiment_id(("window mean R=" + fmt_g17(r)).c_str());

        std::vector<double> sq_err(trials);
        std::vector<Vec> scaled(trials, Vec(d));
        std::vector<std::size_t> redraws(trials, 0);

        parallel_for(
            trials,
            [&](std::size_t i) {
                MarkedField field;
                std::size_t attempt = 0;
                for (;;) {
                    const FieldStreams id{seed, exp_id, i + attempt * trials};
                    field = sample_marked_field(cfg, model, id);
                    if (!field.empty()) {
                        break;
                    }
                    if (++attempt > kMaxRedraws) {
                        throw NoConvergence("window stayed empty after repeated redraws");
                    }
                }
                redraws[i] = attempt;
                const Gaussian fm = empirical_frechet_mean(field, MetricKind::Wasserstein2);
                const Vec err = fm.mean - model.mean_of_means;
                sq_err[i] = err.squaredNorm();
                scaled[i] = std::sqrt(static_cast<double>(field.size())) * err;
            },
            threads);

        const double mean_count = lambda * win.area();
        BoundReport row;
        row.bound_name = "window_mse";
        row.t_or_size = mean_count;
        row.analytic = mse_bound(gamma, lambda, win);
        row.empirical = mean_of(sq_err);
        row.trials = trials;
        row.slack = row.analytic - row.empirical;
        row.mc_slack = 3.0 * se_of(sq_err, row.empirical);
        row.dominance = row.empirical <= row.analytic + row.mc_slack;
        report.mse_rows.push_back(row);

        // Raw second moment of sqrt(N) * error: its expectation is exactly the
        // dispersion when the debiased limit holds (the error has mean zero).
        Mat cov = Mat::Zero(d, d);
        for (const Vec& w : scaled) {
            cov += w * w.transpose();
        }
        cov /= static_cast<double>(trials);
        CltCheck check;
        check.half_width = r;
        check.mean_count = mean_count;
        check.scaled_cov = cov;
        check.frob_rel_err = (cov - gamma.mat()).norm() / gamma.mat().norm();
        report.clt_checks.push_back(check);

        report.resampled.push_back(
            std::accumulate(redraws.begin(), redraws.end(), std::size_t{0}));
        mean_counts.push_back(mean_count);
        mse_values.push_back(row.empirical);
    }

    if (r_grid.size() >= 2) {
        report.mse_rate = fit_loglog(mean_counts, mse_values);
    }
    return report;
}

PalmReport validate_palm_deviation(const MarkModel& model, double lambda,
                                   const std::vector<double>& r_grid,
                                   std::size_t typical_draws, std::size_t trials,
                                   std::uint64_t seed, int threads) {
    if (typical_draws == 0 || trials == 0) {
        throw DomainError("palm study needs at least one draw and one trial");
    }
    const int d = model.dim();
    const auto du = static_cast<std::size_t>(d);
    const SpdMatrix& sigma = model.common_cov;
    const SpdMatrix& gamma = model.mean_dispersion;
    const std::uint64_t exp_id = experiment_id("palm deviation");

    PalmReport report;

    // (a) Typical mark at the origin: replay the exact per-trial substreams
    // palm_field draws the origin mark from, then measure both squared
    // distances by direct quadratic form in the underlying normals.
    {
        std::vector<double> z(typical_draws * du);
        parallel_for(
            typical_draws,
            [&](std::size_t i) {
                RngStream stream(seed, exp_id, i, role::kTypicalMark);
                stream.fill_normals(z.data() + i * du, du);
            },
            threads);
        std::vector<double> x_fr(typical_draws), x_w2(typical_draws);
        batch_quadform(z.data(), typical_draws, whitened_dispersion(sigma, gamma), x_fr.data());
        batch_quadform(z.data(), typical_draws, gamma.mat(), x_w2.data());
        report.typical_fr = two_sided_mean_row("typical_fr_mean", 0.0,
                                               expected_fr_sq(sigma, gamma), x_fr, 0.0);
        report.typical_w2 = two_sided_mean_row("typical_w2_mean", 0.0,
                                               expected_w2_sq(gamma), x_w2, 0.0);
    }

    // (b) Deviation of the background empirical mean across window sizes.
    std::vector<double> mean_counts;
    std::vector<double> mean_fr, var_fr, mean_w2, var_w2;
    for (const double r : r_grid) {
        const Window win{r};
        PppConfig cfg;
        cfg.window = win;
        cfg.intensity = lambda;
        const std::uint64_t run_id =
            experiment_id(("palm deviation R=" + fmt_g17(r)).c_str());

        std::vector<double> x_fr(trials), x_w2(trials);
        std::vector<std::size_t> redraws(trials, 0);
        parallel_for(
            trials,
            [&](std::size_t i) {
                std::optional<PalmSample> palm;
                std::size_t attempt = 0;
                for (;;) {
                    const FieldStreams id{seed, run_id, i + attempt * trials};
                    palm = palm_field(cfg, model, id);
                    if (!palm->background.empty()) {
                        break;
                    }
                    if (++attempt > kMaxRedraws) {
                        throw NoConvergence("background stayed empty after repeated redraws");
                    }
                }
                redraws[i] = attempt;
                const Gaussian fm =
                    empirical_frechet_mean(palm->background, MetricKind::Wasserstein2);
                const Vec err = fm.mean - model.mean_of_means;
                x_fr[i] = mahalanobis_sq(err, sigma);
                x_w2[i] = err.squaredNorm();
            },
            threads);

        mean_counts.push_back(lambda * win.area());
        const double m_fr = mean_of(x_fr);
        const double m_w2 = mean_of(x_w2);
        mean_fr.push_back(m_fr);
        mean_w2.push_back(m_w2);
        const auto nt = static_cast<double>(trials);
        var_fr.push_back(kern::active().sum_sq_dev(x_fr.data(), trials, m_fr) / (nt - 1.0));
        var_w2.push_back(kern::active().sum_sq_dev(x_w2.data(), trials, m_w2) / (nt - 1.0));
        report.resampled.push_back(
            std::accumulate(redraws.begin(), redraws.end(), std::size_t{0}));
    }
    report.mean_rate_fr = fit_loglog(mean_counts, mean_fr);
    report.var_rate_fr = fit_loglog(mean_counts, var_fr);
    report.mean_rate_w2 = fit_loglog(mean_counts, mean_w2);
    report.var_rate_w2 = fit_loglog(mean_counts, var_w2);
    return report;
}

std::vector<BoundReport> validate_count_bounds(const SpdMatrix& gamma, double lambda,
                                               const Window& window,
                                               const std::vector<std::uint64_t>& n_grid,
                                               std::size_t trials, std::uint64_t seed) {
    if (trials == 0) {
        throw DomainError("count study needs at least one trial");
    }
    const auto d = static_cast<std::size_t>(gamma.dim());
    const double m = lambda * window.area();
    const std::uint64_t exp_id = experiment_id("count bounds");
    std::vector<BoundReport> rows;

    // Conditioned counts N | N >= 1 and the first-order 1/(m-1) approximation.
    std::vector<std::uint64_t> counts(trials);
    {
        RngStream stream(seed, exp_id, 0, role::kPointCount);
        std::vector<double> inv(trials);
        for (std::size_t i = 0; i < trials; ++i) {
            std::uint64_t n = 0;
            std::size_t attempts = 0;
            while ((n = stream.poisson(m)) == 0) {
                if (++attempts > kMaxRedraws) {
                    throw NoConvergence("point count stayed zero after repeated redraws");
                }
            }
            counts[i] = n;
            inv[i] = 1.0 / static_cast<double>(n);
        }
        const double analytic = expected_inv_count(lambda, window);
        rows.push_back(two_sided_mean_row("mean_inv_count", m, analytic, inv,
                                          0.02 * analytic));
    }

    // Conditional bound given exactly k points, for each k in the grid.
    for (const std::uint64_t k : n_grid) {
        if (k == 0) {
            throw DomainError("conditional grid entries must be positive");
        }
        const Mat mk = gamma.mat() / static_cast<double>(k);
        std::vector<double> z(trials * d), x(trials);
        RngStream stream(seed, exp_id, k, role::kMarkMeans);
        stream.fill_normals(z.data(), z.size());
        batch_quadform(z.data(), trials, mk, x.data());
        const double mean = gamma.trace() / static_cast<double>(k);
        const std::string name = "conditional_cantelli_n" + std::to_string(k);
        for (const double f : {1.0, 1.5, 2.0, 4.0}) {
            const double t = mean * f;
            rows.push_back(one_sided_row(name, t, conditional_cantelli(gamma, k, t),
                                         exceedance(x, t), trials));
        }
    }

    // Heuristic with the random count replaced by its mean, fed by the same
    // conditioned counts drawn above.
    {
        std::vector<double> z(trials * d), x(trials);
        RngStream stream(seed, exp_id, 1, role::kTypicalMark);
        stream.fill_normals(z.data(), z.size());
        batch_quadform(z.data(), trials, gamma.mat(), x.data());
        for (std::size_t i = 0; i < trials; ++i) {
            x[i] /= static_cast<double>(counts[i]);
        }
        const double base = gamma.trace() / m;
        for (const double f : {1.0, 1.5, 2.0, 4.0}) {
            const double t = base * f;
            rows.push_back(one_sided_row("meta_cantelli", t,
                                         meta_cantelli(gamma, lambda, window, t),
                                         exceedance(x, t), trials));
        }
    }
    return rows;
}

void write_bound_reports_csv(const std::string& path,
                             const std::vector<BoundReport>& rows) {
    std::ofstream out = open_out(path);
    out << "bound_name,t_or_size,analytic,empirical,trials,slack,dominance\n";
    for (const BoundReport& r : rows) {
        out << r.bound_name << ',' << fmt_g17(r.t_or_size) << ',' << fmt_g17(r.analytic)
            << ',' << fmt_g17(r.empirical) << ',' << r.trials << ',' << fmt_g17(r.slack)
            << ',' << (r.dominance ? "true" : "false") << '\n';
    }
    if (!out) {
        throw IoError("failed while writing " + path);
    }
}

} // namespace sig
