#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "sig/bandit.hpp"
#include "sig/compression.hpp"
#include "sig/validators.hpp"
#include "sig/wsn.hpp"

namespace sig {

/// Reference parameters of every study, overridable from the command line
/// or a config file. The defaults reproduce the quantitative studies the
/// artifact is validated against.
struct StudySettings {
    struct WindowMean {
        std::size_t trials = 10000;
        double lambda = 0.1;
        std::vector<double> r_grid = {5.0, 10.0, 15.0, 20.0};
    } window_mean;

    struct Palm {
        std::size_t trials = 10000;
        std::size_t typical_draws = 100000;
        double lambda = 0.1;
        std::vector<double> r_grid = {5.0, 10.0, 15.0, 20.0};
    } palm;

    struct Tail {
        std::size_t trials = 100000;       ///< draws per dispersion pair
        std::size_t count_trials = 100000; ///< trials of the random-count suite
    } tail;

    struct Semantic {
        std::size_t trials = 1000;
        double lambda = 1.0;
        double half_width = 10.0;
        double threshold = 0.05;
        std::vector<double> sparse_factors = {0.05, 0.1, 0.2, 0.4};
    } semantic;

    struct WsnStudy {
        std::size_t trials = 500;
    } wsn;

    struct Bandit {
        std::size_t trials = 100;
        std::uint64_t horizon = 3000;
        double beta = 1.0;
        double epsilon = std::numeric_limits<double>::infinity();
        bool adaptive_epsilon = true;
        MetricKind metric = MetricKind::Wasserstein2;
    } bandit;

    /// Applies one trial-count override to every study.
    void override_trials(std::size_t trials);
};

/// One executed study: outputs written, wall-clock, and whether every
/// asserted comparison held.
struct StudyRecord {
    std::string name;
    double seconds = 0.0;
    std::vector<std::string> files; ///< paths relative to the run directory
    bool all_dominant = true;
};

struct RunManifest {
    std::string directory;
    std::uint64_t seed = 0;
    std::vector<StudyRecord> studies;
    bool all_dominant = true;
};

/// Individual study runners. Each writes CSV/JSON outputs under dir (in a
/// subdirectory named after the study) and returns its record.
[[nodiscard]] StudyRecord run_study_window_mean(const std::string& dir,
                                                const StudySettings& s,
                                                std::uint64_t seed, int threads = 0);
[[nodiscard]] StudyRecord run_study_palm(const std::string& dir, const StudySettings& s,
                                         std::uint64_t seed, int threads = 0);
[[nodiscard]] StudyRecord run_study_tail_fr(const std::string& dir, const StudySettings& s,
                                            std::uint64_t seed);
[[nodiscard]] StudyRecord run_study_tail_w2(const std::string& dir, const StudySettings& s,
                                            std::uint64_t seed);
[[nodiscard]] StudyRecord run_study_counts(const std::string& dir, const StudySettings& s,
                                           std::uint64_t seed);
[[nodiscard]] StudyRecord run_study_semantic(const std::string& dir, const StudySettings& s,
                                             std::uint64_t seed, int threads = 0);
[[nodiscard]] StudyRecord run_study_wsn(const std::string& dir, const StudySettings& s,
                                        std::uint64_t seed, int threads = 0);
[[nodiscard]] StudyRecord run_study_bandit(const std::string& dir, const StudySettings& s,
                                           std::uint64_t seed, int threads = 0);

/// Dispersion pairs (observation covariance, mean dispersion) every tail
/// study runs over.
[[nodiscard]] std::vector<std::pair<SpdMatrix, SpdMatrix>> tail_dispersion_pairs();

/// Creates and returns a fresh run directory out_root/run_<UTC stamp>,
/// appending _2, _3, ... if the stamp collides.
[[nodiscard]] std::string make_run_directory(const std::string& out_root);

/// Runs the seven reference studies — window mean, origin-mark deviation,
/// both distance tails, compression, sensor aggregation, and the bandit
/// comparison — under one fresh timestamped directory below out_root, and
/// writes manifest.json recording seed, versions, and per-study wall-clock.
/// Data files are byte-identical across runs with one seed; only the
/// manifest's timestamp and timings differ.
[[nodiscard]] RunManifest reproduce_all(std::uint64_t seed, const std::string& out_root,
                                        const StudySettings& s = {}, int threads = 0);

void write_manifest_json(const std::string& path, const RunManifest& manifest);

} // namespace sig
