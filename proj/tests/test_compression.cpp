// Field compression: the expected-distortion bound, the intensity sizing
// formula and its round-trip, the distortion/similarity primitives, and the
// Monte-Carlo protocol including the thinning variant.
#include "doctest.h"

#include "sig/compression.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sig;

namespace {

MarkModel unit_model() {
    const SpdMatrix eye = SpdMatrix::identity(2);
    return {Vec::Zero(2), eye, eye};
}

MarkedField field_of(std::initializer_list<double> xs,
                     std::initializer_list<double> mark_means) {
    MarkedField f;
    const SpdMatrix eye = SpdMatrix::identity(2);
    auto mi = mark_means.begin();
    for (const double x : xs) {
        Vec mu(2);
        mu << *mi++, 0.0;
        f.points.push_back({x, 0.0});
        f.marks.emplace_back(mu, eye);
    }
    return f;
}

} // namespace

TEST_CASE("expected distortion bound is additive in the two error floors") {
    const SpdMatrix gamma(2.0 * Mat::Identity(2, 2));
    CompressionSpec spec;
    spec.dense_intensity = 1.0;
    spec.sparse_intensity = 0.25;
    spec.window = Window{5.0}; // area 100
    // tr(Gamma) = 4: 4 * (1/100 + 1/25) = 0.2
    CHECK(expected_distortion_bound(gamma, spec) == doctest::Approx(0.2).epsilon(1e-12));

    // Quadrupling both intensities quarters the bound.
    spec.dense_intensity = 4.0;
    spec.sparse_intensity = 1.0;
    CHECK(expected_distortion_bound(gamma, spec) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("intensity sizing inverts the bound exactly") {
    const SpdMatrix gamma(0.5 * Mat::Identity(2, 2));
    const double lambda = 1.0;
    const Window win{5.0};
    const double floor = gamma.trace() / (lambda * win.area()); // 0.01

    // Thresholds above twice the floor, so the sized sparse intensity stays
    // strictly below the dense one and the spec remains valid.
    for (const double threshold : {0.025, 0.05, 0.3}) {
        const double sparse = min_sparse_intensity(gamma, lambda, win, threshold);
        CHECK(sparse > 0.0);
        CompressionSpec spec;
        spec.dense_intensity = lambda;
        spec.sparse_intensity = sparse;
        spec.window = win;
        // Round-trip: the sized intensity meets the threshold with equality.
        CHECK(expected_distortion_bound(gamma, spec) ==
              doctest::Approx(threshold).epsilon(1e-12));
    }

    // Below the dense field's own floor no sparse intensity can work.
    CHECK_THROWS_AS((void)min_sparse_intensity(gamma, lambda, win, floor),
                    InfeasibleThreshold);
    CHECK_THROWS_AS((void)min_sparse_intensity(gamma, lambda, win, 0.5 * floor),
                    InfeasibleThreshold);
    CHECK_THROWS_AS((void)min_sparse_intensity(gamma, 0.0, win, 0.05), DomainError);
}

TEST_CASE("spec validation rejects degenerate setups") {
    CompressionSpec spec;
    spec.window = Window{5.0};
    CHECK_NOTHROW(spec.validate());

    CompressionSpec bad = spec;
    bad.sparse_intensity = bad.dense_intensity; // not strictly sparser
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = spec;
    bad.sparse_intensity = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = spec;
    bad.threshold = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = spec;
    bad.window = Window{0.0};
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("distortion and similarity vanish exactly when the barycenters agree") {
    // Marks {0, 2} in one field, {1, 1} in the other: both field means sit
    // at (1, 0) with the shared unit covariance.
    const MarkedField a = field_of({-1.0, 1.0}, {0.0, 2.0});
    const MarkedField b = field_of({-2.0, 2.0}, {1.0, 1.0});

    for (const MetricKind metric : {MetricKind::Wasserstein2, MetricKind::FisherRao}) {
        CHECK(semantic_similarity(a, b, metric) <= 1e-12);
        CHECK(semantic_distortion(a, b, metric) == semantic_similarity(a, b, metric));
    }

    // Distinct barycenters: squared distance equals the metric's value on
    // the two mean distributions; with equal covariances both metrics see
    // the Euclidean gap of the means.
    const MarkedField c = field_of({0.0}, {3.0});
    CHECK(semantic_similarity(a, c, MetricKind::Wasserstein2) ==
          doctest::Approx(4.0).epsilon(1e-9));
    CHECK(semantic_similarity(a, c, MetricKind::FisherRao) ==
          doctest::Approx(4.0).epsilon(1e-9));
    // Symmetry holds bit-for-bit.
    CHECK(semantic_similarity(a, c, MetricKind::Wasserstein2) ==
          semantic_similarity(c, a, MetricKind::Wasserstein2));

    MarkedField empty;
    CHECK_THROWS_AS((void)semantic_distortion(a, empty, MetricKind::Wasserstein2),
                    EmptyWindow);
    CHECK_THROWS_AS((void)semantic_distortion(empty, a, MetricKind::Wasserstein2),
                    EmptyWindow);
}

TEST_CASE("compression protocol: mean distortion respects the bound") {
    const MarkModel model = unit_model();
    CompressionSpec spec;
    spec.dense_intensity = 1.0;
    spec.sparse_intensity = 0.25;
    spec.window = Window{5.0};
    spec.threshold = 0.3;

    const CompressionRun run = run_compression_protocol(model, spec, 400, 31);
    CHECK(run.report.bound_name == "expected_distortion");
    CHECK(run.report.t_or_size == doctest::Approx(0.25));
    CHECK(run.report.analytic ==
          doctest::Approx(expected_distortion_bound(model.mean_dispersion, spec)));
    CHECK(run.report.trials == 400);
    CHECK(run.report.dominance);
    CHECK(run.report.empirical > 0.0);
    CHECK(run.rows.size() == 400);
    CHECK(run.scheme == SparseScheme::IndependentField);
    for (const CompressionTrialRow& row : run.rows) {
        CHECK(row.n_dense > 0);
        CHECK(row.n_sparse > 0);
        CHECK(row.distortion >= 0.0);
    }
    CHECK(run.fraction_within_threshold > 0.5);
    CHECK(run.fraction_within_threshold <= 1.0);

    // Same seed reproduces every trial bit-for-bit; a different seed moves
    // the mean.
    const CompressionRun again = run_compression_protocol(model, spec, 400, 31);
    CHECK(run.report.empirical == again.report.empirical);
    for (std::size_t i = 0; i < run.rows.size(); ++i) {
        CHECK(run.rows[i].distortion == again.rows[i].distortion);
        CHECK(run.rows[i].n_dense == again.rows[i].n_dense);
    }
    const CompressionRun moved = run_compression_protocol(model, spec, 400, 32);
    CHECK(moved.report.empirical != run.report.empirical);
}

TEST_CASE("compression protocol: denser sparse fields distort less") {
    const MarkModel model = unit_model();
    CompressionSpec spec;
    spec.dense_intensity = 1.0;
    spec.window = Window{5.0};

    spec.sparse_intensity = 0.1;
    const double coarse =
        run_compression_protocol(model, spec, 300, 7).report.empirical;
    spec.sparse_intensity = 0.8;
    const double fine =
        run_compression_protocol(model, spec, 300, 7).report.empirical;
    CHECK(fine < coarse);
}

TEST_CASE("thinning with keep probability one reproduces the dense field") {
    const MarkModel model = unit_model();
    CompressionSpec spec;
    spec.dense_intensity = 1.0;
    spec.window = Window{5.0};
    // keep = sparse/dense = 1: the sparse field is the dense field, so the
    // distortion is identically zero. validate() demands strict sparsity,
    // so drive the sampler just below one.
    spec.sparse_intensity = std::nextafter(1.0, 0.0);

    const CompressionRun run =
        run_compression_protocol(model, spec, 50, 13, SparseScheme::Thinning);
    CHECK(run.scheme == SparseScheme::Thinning);
    for (const CompressionTrialRow& row : run.rows) {
        CHECK(row.n_sparse == row.n_dense);
        CHECK(row.distortion <= 1e-12);
    }
}

TEST_CASE("thinning run reports plausible distortions at genuine sparsity") {
    const MarkModel model = unit_model();
    CompressionSpec spec;
    spec.dense_intensity = 1.0;
    spec.sparse_intensity = 0.25;
    spec.window = Window{5.0};
    const CompressionRun run =
        run_compression_protocol(model, spec, 200, 17, SparseScheme::Thinning);
    CHECK(run.report.empirical > 0.0);
    for (const CompressionTrialRow& row : run.rows) {
        CHECK(row.n_sparse <= row.n_dense);
    }
}

TEST_CASE("compression CSV golden format") {
    CompressionRun run;
    run.rows.push_back({0, 101, 27, 0.125});
    run.rows.push_back({1, 98, 31, 1.0 / 3.0});
    const std::string path =
        (std::filesystem::temp_directory_path() / "sig_test_compression.csv").string();
    write_compression_csv(path, run);
    std::ifstream in(path);
    std::string header, r0, r1;
    std::getline(in, header);
    std::getline(in, r0);
    std::getline(in, r1);
    CHECK(header == "trial,n_dense,n_sparse,distortion");
    CHECK(r0 == "0,101,27,0.125");
    std::stringstream ss(r1);
    std::string field;
    for (int i = 0; i < 4; ++i) {
        std::getline(ss, field, ',');
    }
    CHECK(std::stod(field) == 1.0 / 3.0);
    std::remove(path.c_str());
}
