// Command-line driver: runs the Monte-Carlo validation studies and writes
// their CSV/JSON outputs under a fresh timestamped run directory.
//
// Exit codes: 0 all asserted comparisons held; 1 the run completed but at
// least one asserted comparison failed; 2 the command line or config file
// could not be interpreted; 3 a file could not be read or written.

#include "sig/errors.hpp"
#include "sig/parallel.hpp"
#include "sig/reproduce.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace {

using nlohmann::json;

constexpr const char* kStudies[] = {"wsn",  "semantic", "bandit", "bounds",
                                    "palm", "clt",      "all"};

bool known_study(const std::string& s) {
    for (const char* k : kStudies) {
        if (s == k) {
            return true;
        }
    }
    return false;
}

sig::MetricKind parse_metric(const std::string& name) {
    if (name == "w2" || name == "wasserstein2") {
        return sig::MetricKind::Wasserstein2;
    }
    if (name == "fr" || name == "fisher_rao") {
        return sig::MetricKind::FisherRao;
    }
    throw sig::UsageError("unknown metric '" + name +
                          "' (expected w2, wasserstein2, fr, or fisher_rao)");
}

// --- config file ------------------------------------------------------------

void require_keys(const json& obj, const char* section,
                  const std::vector<std::string>& allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const std::string& a : allowed) {
            if (key == a) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw sig::UsageError(std::string("unknown config key '") + key +
                                  "' in " + section);
        }
    }
}

template <typename T>
void maybe(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) {
        try {
            out = obj.at(key).get<T>();
        } catch (const json::exception&) {
            throw sig::UsageError(std::string("config key '") + key +
                                  "' has the wrong type");
        }
    }
}

void maybe_epsilon(const json& obj, const char* key, double& out) {
    if (!obj.contains(key)) {
        return;
    }
    const json& v = obj.at(key);
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "infinity" || s == "inf") {
            out = std::numeric_limits<double>::infinity();
            return;
        }
        throw sig::UsageError("config key 'epsilon' must be a number or \"infinity\"");
    }
    maybe(obj, key, out);
}

struct TopLevel {
    std::string study;
    bool has_study = false;
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::size_t trials = 0;
    bool has_trials = false;
    std::string out;
    bool has_out = false;
    int threads = 0;
    bool has_threads = false;
};

/// Parses the config document into per-study settings and top-level options.
/// Every key must be recognized; values must have the right type.
void apply_config(const json& doc, sig::StudySettings& s, TopLevel& top) {
    if (!doc.is_object()) {
        throw sig::UsageError("config file must hold a JSON object");
    }
    require_keys(doc, "the top level",
                 {"study", "seed", "trials", "out", "threads", "window_mean", "palm",
                  "tail", "semantic", "wsn", "bandit"});

    if (doc.contains("study")) {
        maybe(doc, "study", top.study);
        if (!known_study(top.study)) {
            throw sig::UsageError("unknown study '" + top.study + "' in config");
        }
        top.has_study = true;
    }
    if (doc.contains("seed")) {
        maybe(doc, "seed", top.seed);
        top.has_seed = true;
    }
    if (doc.contains("trials")) {
        maybe(doc, "trials", top.trials);
        top.has_trials = true;
    }
    if (doc.contains("out")) {
        maybe(doc, "out", top.out);
        top.has_out = true;
    }
    if (doc.contains("threads")) {
        maybe(doc, "threads", top.threads);
        top.has_threads = true;
    }

    if (doc.contains("window_mean")) {
        const json& j = doc.at("window_mean");
        require_keys(j, "window_mean", {"trials", "lambda", "r_grid"});
        maybe(j, "trials", s.window_mean.trials);
        maybe(j, "lambda", s.window_mean.lambda);
        maybe(j, "r_grid", s.window_mean.r_grid);
    }
    if (doc.contains("palm")) {
        const json& j = doc.at("palm");
        require_keys(j, "palm", {"trials", "typical_draws", "lambda", "r_grid"});
        maybe(j, "trials", s.palm.trials);
        maybe(j, "typical_draws", s.palm.typical_draws);
        maybe(j, "lambda", s.palm.lambda);
        maybe(j, "r_grid", s.palm.r_grid);
    }
    if (doc.contains("tail")) {
        const json& j = doc.at("tail");
        require_keys(j, "tail", {"trials", "count_trials"});
        maybe(j, "trials", s.tail.trials);
        maybe(j, "count_trials", s.tail.count_trials);
    }
    if (doc.contains("semantic")) {
        const json& j = doc.at("semantic");
        require_keys(j, "semantic",
                     {"trials", "lambda", "half_width", "threshold", "sparse_factors"});
        maybe(j, "trials", s.semantic.trials);
        maybe(j, "lambda", s.semantic.lambda);
        maybe(j, "half_width", s.semantic.half_width);
        maybe(j, "threshold", s.semantic.threshold);
        maybe(j, "sparse_factors", s.semantic.sparse_factors);
    }
    if (doc.contains("wsn")) {
        const json& j = doc.at("wsn");
        require_keys(j, "wsn", {"trials"});
        maybe(j, "trials", s.wsn.trials);
    }
    if (doc.contains("bandit")) {
        const json& j = doc.at("bandit");
        require_keys(j, "bandit", {"trials", "horizon", "beta", "epsilon",
                                   "adaptive_epsilon", "metric"});
        maybe(j, "trials", s.bandit.trials);
        maybe(j, "horizon", s.bandit.horizon);
        maybe(j, "beta", s.bandit.beta);
        maybe_epsilon(j, "epsilon", s.bandit.epsilon);
        maybe(j, "adaptive_epsilon", s.bandit.adaptive_epsilon);
        if (j.contains("metric")) {
            std::string m;
            maybe(j, "metric", m);
            s.bandit.metric = parse_metric(m);
        }
    }
}

// --- study execution ---------------------------------------------------------

int run(const std::string& study, std::uint64_t seed, const std::string& out,
        const sig::StudySettings& settings, int threads) {
    sig::RunManifest manifest;
    if (study == "all") {
        manifest = sig::reproduce_all(seed, out, settings, threads);
    } else {
        manifest.directory = sig::make_run_directory(out);
        manifest.seed = seed;
        if (study == "clt") {
            manifest.studies.push_back(
                sig::run_study_window_mean(manifest.directory, settings, seed, threads));
        } else if (study == "palm") {
            manifest.studies.push_back(
                sig::run_study_palm(manifest.directory, settings, seed, threads));
        } else if (study == "bounds") {
            manifest.studies.push_back(
                sig::run_study_tail_fr(manifest.directory, settings, seed));
            manifest.studies.push_back(
                sig::run_study_tail_w2(manifest.directory, settings, seed));
            manifest.studies.push_back(
                sig::run_study_counts(manifest.directory, settings, seed));
        } else if (study == "semantic") {
            manifest.studies.push_back(
                sig::run_study_semantic(manifest.directory, settings, seed, threads));
        } else if (study == "wsn") {
            manifest.studies.push_back(
                sig::run_study_wsn(manifest.directory, settings, seed, threads));
        } else if (study == "bandit") {
            manifest.studies.push_back(
                sig::run_study_bandit(manifest.directory, settings, seed, threads));
        } else {
            throw sig::UsageError("unknown study '" + study + "'");
        }
        for (const sig::StudyRecord& r : manifest.studies) {
            manifest.all_dominant = manifest.all_dominant && r.all_dominant;
        }
        sig::write_manifest_json(
            (std::filesystem::path(manifest.directory) / "manifest.json").string(),
            manifest);
    }

    for (const sig::StudyRecord& r : manifest.studies) {
        std::printf("study %-12s %s  (%.2fs)\n", r.name.c_str(),
                    r.all_dominant ? "ok" : "FAILED", r.seconds);
    }
    std::printf("%s\n", manifest.directory.c_str());
    return manifest.all_dominant ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Monte-Carlo validation studies of barycenters of Gaussian marks on "
        "planar Poisson fields"};
    app.get_formatter()->column_width(26);

    std::string study = "all";
    std::uint64_t seed = 42;
    std::size_t trials = 0;
    std::string out;
    std::string config_path;
    int threads = 0;

    app.add_option("--study", study,
                   "Which study to run:\n"
                   "  clt       window means: MSE bound, decay rate, scaled-error "
                   "covariance\n"
                   "  palm      origin-mark deviation moments and background decay "
                   "rates\n"
                   "  bounds    distance-tail and random-count concentration bounds\n"
                   "  semantic  dense-vs-sparse field distortion against its "
                   "expectation bound\n"
                   "  wsn       precision-weighted vs plain averaging of sensor "
                   "reports\n"
                   "  bandit    classical UCB vs the barycenter-guided variant\n"
                   "  all       every study above except the count suite, one "
                   "manifest")
        ->check(CLI::IsMember(std::vector<std::string>(std::begin(kStudies),
                                                       std::end(kStudies))));
    app.add_option("--seed", seed, "Master seed (default 42)");
    app.add_option("--trials", trials,
                   "Override the trial count of every study (default: per-study)");
    app.add_option("--out", out,
                   "Output root; a fresh run_<stamp> directory is created below "
                   "it (default: $SIG_OUT_DIR or ./runs)");
    app.add_option("--config", config_path,
                   "JSON config file; command-line flags take precedence");
    app.add_option("--threads", threads,
                   "Worker threads (default: hardware concurrency)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
            return app.exit(e); // --help / --version
        }
        app.exit(e);
        return 2;
    }

    try {
        sig::StudySettings settings;
        TopLevel top;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw sig::IoError("cannot open config file " + config_path);
            }
            json doc;
            try {
                doc = json::parse(in);
            } catch (const json::parse_error& e) {
                throw sig::UsageError(std::string("config file is not valid JSON: ") +
                                      e.what());
            }
            apply_config(doc, settings, top);
        }

        // Command line beats config; config beats defaults.
        if (app.count("--study") == 0 && top.has_study) {
            study = top.study;
        }
        if (app.count("--seed") == 0 && top.has_seed) {
            seed = top.seed;
        }
        if (app.count("--trials") == 0 && top.has_trials) {
            trials = top.trials;
        }
        if (app.count("--out") == 0 && top.has_out) {
            out = top.out;
        }
        if (app.count("--threads") == 0 && top.has_threads) {
            threads = top.threads;
        }

        if (out.empty()) {
            const char* env = std::getenv("SIG_OUT_DIR");
            out = (env != nullptr && *env != '\0') ? env : "./runs";
        }
        if (trials > 0) {
            settings.override_trials(trials);
        }
        if (threads <= 0) {
            const unsigned hw = std::thread::hardware_concurrency();
            threads = hw > 0 ? static_cast<int>(hw) : 1;
        }
        sig::set_default_thread_count(threads);

        return run(study, seed, out, settings, threads);
    } catch (const sig::UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const sig::DomainError& e) {
        // Raised by parameter validation, i.e. bad values in flags or config.
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const sig::InfeasibleThreshold& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const sig::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
