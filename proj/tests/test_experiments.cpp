// Study orchestration: the sensor-aggregation experiment, study settings,
// run-directory management, per-study outputs, and cross-run byte identity
// of every data artifact.
#include "doctest.h"

#include "sig/reproduce.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace sig;
namespace fs = std::filesystem;

namespace {

std::string fresh_root(const char* tag) {
    const fs::path p = fs::temp_directory_path() / (std::string("sig_exp_") + tag);
    fs::remove_all(p);
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Relative path -> content for every regular file under root.
std::map<std::string, std::string> tree_contents(const std::string& root) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) {
            out[fs::relative(entry.path(), root).string()] = slurp(entry.path());
        }
    }
    return out;
}

} // namespace

TEST_CASE("region sizing solves the mean-error bound for the area") {
    // area = trace / (lambda * epsilon)
    CHECK(required_region_size(0.2, 0.1, 0.04) == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(required_region_size(2.0, 0.5, 0.01) == doctest::Approx(400.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)required_region_size(0.0, 0.1, 0.04), DomainError);
    CHECK_THROWS_AS((void)required_region_size(0.2, 0.0, 0.04), DomainError);
    CHECK_THROWS_AS((void)required_region_size(0.2, 0.1, 0.0), DomainError);
}

TEST_CASE("sensor config validation") {
    WsnConfig cfg;
    CHECK_NOTHROW(cfg.validate());

    WsnConfig bad = cfg;
    bad.lambda = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = cfg;
    bad.r_grid = {5.0, 5.0};
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = cfg;
    bad.r_grid.clear();
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = cfg;
    bad.reliable_fraction = 1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = cfg;
    bad.reliable_fraction = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = cfg;
    bad.trials = 0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = cfg;
    bad.unreliable_bias = Vec::Ones(3);
    CHECK_THROWS_AS(bad.validate(), DimensionMismatch);
}

TEST_CASE("sensor experiment: shape, determinism, and weighting advantage") {
    WsnConfig cfg;
    cfg.r_grid = {5.0, 15.0};
    cfg.trials = 80;

    const MseTable table = run_wsn_experiment(cfg, 808);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].half_width == 5.0);
    CHECK(table.rows[1].half_width == 15.0);
    for (const MseRow& row : table.rows) {
        CHECK(row.trials == 80);
        CHECK(row.euclidean_mse > 0.0);
        CHECK(row.frechet_mse > 0.0);
        CHECK(row.euclidean_se > 0.0);
        CHECK(row.frechet_se > 0.0);
        CHECK(row.frechet_wins <= row.trials);
    }
    // The class-weighted estimator beats the plain average decisively once
    // the window holds enough sensors.
    CHECK(table.rows[1].frechet_mse < table.rows[1].euclidean_mse);
    CHECK(table.rows[1].frechet_wins > 60);

    const MseTable again = run_wsn_experiment(cfg, 808);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        CHECK(table.rows[i].euclidean_mse == again.rows[i].euclidean_mse);
        CHECK(table.rows[i].frechet_mse == again.rows[i].frechet_mse);
        CHECK(table.rows[i].frechet_wins == again.rows[i].frechet_wins);
    }
    const MseTable moved = run_wsn_experiment(cfg, 809);
    CHECK(moved.rows[0].euclidean_mse != table.rows[0].euclidean_mse);
}

TEST_CASE("sensor CSV golden format") {
    MseTable table;
    MseRow row;
    row.half_width = 5.0;
    row.euclidean_mse = 0.25;
    row.frechet_mse = 0.125;
    row.trials = 10;
    row.empty_resampled = 1;
    table.rows.push_back(row);
    const std::string path =
        (fs::temp_directory_path() / "sig_test_wsn.csv").string();
    write_wsn_csv(path, table);
    std::ifstream in(path);
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    CHECK(header == "R,euclidean_mse,frechet_mse,trials,empty_resampled");
    CHECK(line == "5,0.25,0.125,10,1");
    fs::remove(path);
}

TEST_CASE("study settings: one override reaches every study") {
    StudySettings s;
    s.override_trials(17);
    CHECK(s.window_mean.trials == 17);
    CHECK(s.palm.trials == 17);
    CHECK(s.tail.trials == 17);
    CHECK(s.tail.count_trials == 17);
    CHECK(s.semantic.trials == 17);
    CHECK(s.wsn.trials == 17);
    CHECK(s.bandit.trials == 17);
    CHECK(s.bandit.horizon == 3000); // untouched
    CHECK_THROWS_AS(s.override_trials(0), DomainError);
}

TEST_CASE("run directories are fresh and collision-safe") {
    const std::string root = fresh_root("rundir");
    const std::string a = make_run_directory(root);
    const std::string b = make_run_directory(root);
    CHECK(a != b);
    CHECK(fs::is_directory(a));
    CHECK(fs::is_directory(b));
    CHECK(fs::path(a).filename().string().rfind("run_", 0) == 0);
    CHECK(fs::path(b).filename().string().rfind("run_", 0) == 0);
    fs::remove_all(root);
}

TEST_CASE("every study writes the files its record declares") {
    const std::string root = fresh_root("studies");
    const std::string dir = make_run_directory(root);
    StudySettings s;
    s.override_trials(25);

    std::vector<StudyRecord> records;
    records.push_back(run_study_window_mean(dir, s, 7));
    records.push_back(run_study_palm(dir, s, 7));
    records.push_back(run_study_tail_fr(dir, s, 7));
    records.push_back(run_study_tail_w2(dir, s, 7));
    records.push_back(run_study_counts(dir, s, 7));
    records.push_back(run_study_semantic(dir, s, 7));
    records.push_back(run_study_wsn(dir, s, 7));
    records.push_back(run_study_bandit(dir, s, 7));

    for (const StudyRecord& rec : records) {
        CAPTURE(rec.name);
        CHECK(!rec.name.empty());
        CHECK(rec.seconds >= 0.0);
        REQUIRE(!rec.files.empty());
        for (const std::string& rel : rec.files) {
            CAPTURE(rel);
            CHECK(fs::is_regular_file(fs::path(dir) / rel));
            // Every artifact lives in the study's own subdirectory.
            CHECK(rel.rfind(rec.name + "/", 0) == 0);
        }
    }
    fs::remove_all(root);
}

TEST_CASE("full reproduction is byte-identical across runs of one seed") {
    const std::string root = fresh_root("repro");
    StudySettings s;
    s.override_trials(10);
    s.palm.typical_draws = 2000;

    const RunManifest first = reproduce_all(4242, root, s);
    const RunManifest second = reproduce_all(4242, root, s);
    REQUIRE(first.directory != second.directory);
    REQUIRE(first.studies.size() == 7);
    REQUIRE(second.studies.size() == 7);

    const auto tree_a = tree_contents(first.directory);
    const auto tree_b = tree_contents(second.directory);
    REQUIRE(tree_a.size() == tree_b.size());
    REQUIRE(tree_a.count("manifest.json") == 1);
    for (const auto& [rel, content] : tree_a) {
        CAPTURE(rel);
        REQUIRE(tree_b.count(rel) == 1);
        if (rel == "manifest.json") {
            continue; // timestamps and wall-clock naturally differ
        }
        CHECK(content == tree_b.at(rel));
    }

    // A different seed changes the data.
    const RunManifest third = reproduce_all(4243, root, s);
    const auto tree_c = tree_contents(third.directory);
    bool any_differ = false;
    for (const auto& [rel, content] : tree_a) {
        if (rel != "manifest.json" && tree_c.count(rel) == 1 &&
            tree_c.at(rel) != content) {
            any_differ = true;
        }
    }
    CHECK(any_differ);

    // Manifest structure: versions, per-study records, the seed echoed back.
    const nlohmann::json manifest =
        nlohmann::json::parse(slurp(fs::path(first.directory) / "manifest.json"));
    CHECK(manifest.at("seed").get<std::uint64_t>() == 4242);
    CHECK(manifest.at("versions").at("artifact").get<std::string>() == "1.0.0");
    CHECK(manifest.at("versions").contains("eigen"));
    CHECK(manifest.at("versions").contains("compiler"));
    REQUIRE(manifest.at("studies").is_array());
    REQUIRE(manifest.at("studies").size() == 7);
    std::vector<std::string> names;
    for (const auto& st : manifest.at("studies")) {
        names.push_back(st.at("name").get<std::string>());
        CHECK(st.at("seconds").is_number());
        CHECK(st.at("files").is_array());
        CHECK(st.at("all_dominant").is_boolean());
    }
    const std::vector<std::string> expected = {"window_mean", "palm", "tail_fr",
                                               "tail_w2",     "semantic", "wsn",
                                               "bandit"};
    CHECK(names == expected);
    fs::remove_all(root);
}
