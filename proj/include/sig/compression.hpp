#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sig/field.hpp"
#include "sig/validators.hpp"

namespace sig {

/// Dense/sparse field comparison setup: a dense process at dense_intensity
/// and a sparse one at sparse_intensity observe the same mark population in
/// one window; threshold is the target expected distortion.
struct CompressionSpec {
    double dense_intensity = 1.0;
    double sparse_intensity = 0.25;
    Window window;
    double threshold = 0.05;
    MetricKind metric = MetricKind::Wasserstein2;

    /// Requires dense > sparse > 0 and threshold > 0 (DomainError).
    void validate() const;
};

/// How the sparse field is produced: an independent process at the sparse
/// intensity (matches the expectation bound's derivation), or probabilistic
/// thinning of the dense field with keep probability sparse/dense (the
/// subset-selection narrative). The bound is asserted only for the
/// independent variant; thinning results are reported as-is.
enum class SparseScheme { IndependentField, Thinning };

/// Squared metric distance between the empirical Fréchet means of the two
/// fields. Raises EmptyWindow when either field is empty.
[[nodiscard]] double semantic_distortion(const MarkedField& dense, const MarkedField& sparse,
                                         MetricKind metric, const SolverOptions& opts = {});

/// Squared metric distance between two fields' empirical Fréchet means —
/// the symmetric field-similarity primitive (0 iff the barycenters agree).
[[nodiscard]] double semantic_similarity(const MarkedField& a, const MarkedField& b,
                                         MetricKind metric, const SolverOptions& opts = {});

/// tr(Gamma) * (1/(dense*area) + 1/(sparse*area)).
[[nodiscard]] double expected_distortion_bound(const SpdMatrix& gamma,
                                               const CompressionSpec& spec);

/// Smallest sparse intensity whose expected-distortion bound meets the
/// threshold: (tr(Gamma)/area) / (threshold - tr(Gamma)/(lambda*area)).
/// Raises InfeasibleThreshold when the threshold is not above the dense
/// field's own error floor tr(Gamma)/(lambda*area).
[[nodiscard]] double min_sparse_intensity(const SpdMatrix& gamma, double lambda,
                                          const Window& window, double threshold);

struct CompressionTrialRow {
    std::size_t trial = 0;
    std::size_t n_dense = 0;
    std::size_t n_sparse = 0;
    double distortion = 0.0;
};

struct CompressionRun {
    BoundReport report; ///< "expected_distortion": empirical mean vs the bound
    double fraction_within_threshold = 0.0;
    std::vector<CompressionTrialRow> rows;
    std::size_t resampled = 0; ///< empty-field redraws
    SparseScheme scheme = SparseScheme::IndependentField;
};

/// Samples trial pairs of dense/sparse fields over the model's marks,
/// measures the distortion per trial, and compares the mean against
/// expected_distortion_bound (one-sided, three standard errors). Pairs with
/// an empty member are redrawn from fresh substreams and counted. The
/// report's t_or_size carries the sparse intensity so grid runs stay
/// distinguishable.
[[nodiscard]] CompressionRun run_compression_protocol(const MarkModel& model,
                                                      const CompressionSpec& spec,
                                                      std::size_t trials,
                                                      std::uint64_t seed,
                                                      SparseScheme scheme =
                                                          SparseScheme::IndependentField,
                                                      int threads = 0);

/// Writes "trial,n_dense,n_sparse,distortion".
void write_compression_csv(const std::string& path, const CompressionRun& run);

} // namespace sig
