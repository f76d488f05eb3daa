// Experiment configuration, record persistence, aggregation, and the
// orchestrated run.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "blocknem/harness.hpp"

using namespace blocknem;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("blocknem_harness_" + name);
    fs::remove_all(dir);
    return dir;
}

std::vector<std::string> sorted_rows(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) rows.push_back(line);
    std::sort(rows.begin(), rows.end());
    rows.insert(rows.begin(), header);
    return rows;
}

ExperimentConfig tiny_config(const std::string& out_name) {
    ExperimentConfig config;
    config.n_thetas = 2;
    config.reps_per_theta = 2;
    config.n_units = 8;
    config.total_iterations = 60;
    config.checkpoints = {20, 60};
    config.restarts = 15;
    config.k_clusters = 3;
    config.rf_mode = RfMode::Final;
    config.rf_k_rand = 3;
    config.rf_restarts = 10;
    config.master_seed = 99;
    config.out_dir = temp_dir(out_name).string();
    config.threads = 2;
    return config;
}

}  // namespace

TEST_CASE("config text parsing covers every key") {
    const std::string text =
        "# experiment\n"
        "n_thetas = 5\n"
        "reps_per_theta = 3\n"
        "n_units = 12\n"
        "q = 5/9\n"
        "total_iterations = 500\n"
        "checkpoints = 100, 250, 500\n"
        "restarts = 42\n"
        "k_clusters = 3\n"
        "rf_mode = all\n"
        "rf_trace_thetas = 1, 4\n"
        "rf_k_rand = 7\n"
        "rf_restarts = 11\n"
        "master_seed = 1234\n"
        "out_dir = /tmp/somewhere\n"
        "threads = 2\n"
        "snapshots = true\n"
        "theta = -0.18, 0.74, 0.37, -0.35, 0.42\n"
        "theta = 0.1, 0.2, 0.3, 0.4, 0.5\n";
    const ExperimentConfig config = parse_config_text(text);
    CHECK(config.n_thetas == 5);
    CHECK(config.reps_per_theta == 3);
    CHECK(config.n_units == 12);
    CHECK(config.q == doctest::Approx(5.0 / 9.0));
    CHECK(config.total_iterations == 500);
    CHECK(config.checkpoints == std::vector<long long>{100, 250, 500});
    CHECK(config.restarts == 42);
    CHECK(config.rf_mode == RfMode::All);
    CHECK(config.rf_trace_thetas == std::vector<int>{1, 4});
    CHECK(config.rf_k_rand == 7);
    CHECK(config.rf_restarts == 11);
    CHECK(config.master_seed == 1234);
    CHECK(config.out_dir == "/tmp/somewhere");
    CHECK(config.threads == 2);
    CHECK(config.snapshots);
    REQUIRE(config.explicit_thetas.size() == 2);
    CHECK(config.explicit_thetas[0].popularity == doctest::Approx(0.74));
    config.validate();
}

TEST_CASE("config parsing rejects unknown keys and malformed values") {
    CHECK_THROWS_WITH_AS(parse_config_text("mystery = 1\n"), doctest::Contains("unknown key"),
                         std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("n_thetas\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("n_thetas = abc\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("q = 1/0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("snapshots = perhaps\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("theta = 1, 2, 3\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("rf_mode = sometimes\n"), std::invalid_argument);
}

TEST_CASE("config validation catches inconsistent settings") {
    ExperimentConfig config;
    config.q = 1.5;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = ExperimentConfig{};
    config.k_clusters = 2;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = ExperimentConfig{};
    config.checkpoints = {100, 50};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = ExperimentConfig{};
    config.total_iterations = 200;
    config.checkpoints = {100, 300};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("record CSV round trip, including missing and undefined rf") {
    SimulationRecord r;
    r.theta_id = 3;
    r.rep = 2;
    r.iteration = 1303;
    r.density = 0.5625;
    r.inconsistent = 4;
    r.rf_core_cohesive = 0.75;
    r.rf_cohesive = std::nullopt;
    r.rf_core_periphery = std::numeric_limits<double>::quiet_NaN();

    const std::string row = record_to_csv(r);
    CHECK(row == "3,2,1303,0.562500,4,0.750000,,NA");

    const fs::path path = fs::temp_directory_path() / "blocknem_records_roundtrip.csv";
    {
        std::ofstream out(path);
        out << record_csv_header() << '\n' << row << '\n';
    }
    const std::vector<SimulationRecord> back = read_records_csv(path.string());
    REQUIRE(back.size() == 1);
    CHECK(back[0].theta_id == 3);
    CHECK(back[0].iteration == 1303);
    CHECK(back[0].density == doctest::Approx(0.5625));
    REQUIRE(back[0].rf_core_cohesive.has_value());
    CHECK(*back[0].rf_core_cohesive == doctest::Approx(0.75));
    CHECK_FALSE(back[0].rf_cohesive.has_value());
    REQUIRE(back[0].rf_core_periphery.has_value());
    CHECK(std::isnan(*back[0].rf_core_periphery));
    fs::remove(path);
}

TEST_CASE("summarize: single record, means, missing rf handling") {
    SimulationRecord a;
    a.theta_id = 1;
    a.rep = 1;
    a.iteration = 100;
    a.density = 0.25;
    a.inconsistent = 0;
    a.rf_core_cohesive = 1.0;

    std::vector<SimulationRecord> records = {a};
    std::vector<SummaryRow> rows = summarize(records);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n_reps == 1);
    CHECK(rows[0].mean_density == doctest::Approx(0.25));
    CHECK(rows[0].mean_inconsistent == 0.0);
    REQUIRE(rows[0].mean_rf_core_cohesive.has_value());
    CHECK(*rows[0].mean_rf_core_cohesive == doctest::Approx(1.0));
    CHECK_FALSE(rows[0].mean_rf_cohesive.has_value());

    SimulationRecord b = a;
    b.rep = 2;
    b.inconsistent = 1;
    b.rf_core_cohesive = std::numeric_limits<double>::quiet_NaN();  // excluded from the mean
    records.push_back(b);
    rows = summarize(records);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n_reps == 2);
    CHECK(rows[0].mean_inconsistent == doctest::Approx(0.5));
    CHECK(*rows[0].mean_rf_core_cohesive == doctest::Approx(1.0));

    // aggregation ignores record order
    std::swap(records[0], records[1]);
    const std::vector<SummaryRow> swapped = summarize(records);
    CHECK(swapped[0].mean_inconsistent == doctest::Approx(0.5));

    CHECK(summarize({}).empty());
}

TEST_CASE("summary serializers") {
    SimulationRecord a;
    a.theta_id = 2;
    a.rep = 1;
    a.iteration = 50;
    a.density = 0.4;
    a.inconsistent = 3;
    const std::vector<SummaryRow> rows = summarize({a});
    const std::string csv = summary_csv(rows);
    CHECK(csv.find("theta_id,iter,n_reps,") == 0);
    CHECK(csv.find("2,50,1,0.400000,3.000000,,,") != std::string::npos);
    const std::string json = summary_json(rows);
    CHECK(json.find("\"mean_rf_cohesive\": null") != std::string::npos);
    CHECK(json.find("\"theta_id\": 2") != std::string::npos);
}

TEST_CASE("run_experiment produces the full record grid deterministically") {
    const ExperimentConfig config = tiny_config("determinism_a");
    const RunResult first = run_experiment(config);
    CHECK(first.failures.empty());
    CHECK(first.records.size() == 2 * 2 * 2);  // thetas x reps x checkpoints

    // records arrive in (theta, rep, checkpoint) order regardless of threads
    for (std::size_t i = 1; i < first.records.size(); ++i) {
        const auto& prev = first.records[i - 1];
        const auto& cur = first.records[i];
        const auto key = [](const SimulationRecord& r) {
            return std::make_tuple(r.theta_id, r.rep, r.iteration);
        };
        CHECK(key(prev) < key(cur));
    }

    for (const SimulationRecord& r : first.records) {
        CHECK(r.density >= 0.0);
        CHECK(r.density <= 1.0);
        CHECK(r.inconsistent >= 0);
        CHECK(r.inconsistent <= 9);
        const bool final_row = r.iteration == 60;
        CHECK(r.rf_core_cohesive.has_value() == final_row);
        CHECK(r.rf_core_periphery.has_value() == final_row);
    }

    ExperimentConfig again = tiny_config("determinism_b");
    again.threads = 1;
    const RunResult second = run_experiment(again);
    REQUIRE(second.records.size() == first.records.size());
    CHECK(sorted_rows(first.records_path) == sorted_rows(second.records_path));

    // the persisted rows reproduce the in-run aggregates exactly
    const std::vector<SimulationRecord> reread = read_records_csv(first.records_path);
    const std::vector<SummaryRow> from_file = summarize(reread);
    const std::vector<SummaryRow> in_run = summarize(first.records);
    REQUIRE(from_file.size() == in_run.size());
    for (std::size_t i = 0; i < in_run.size(); ++i) {
        CHECK(from_file[i].theta_id == in_run[i].theta_id);
        CHECK(from_file[i].iteration == in_run[i].iteration);
        CHECK(from_file[i].n_reps == in_run[i].n_reps);
        CHECK(from_file[i].mean_inconsistent == doctest::Approx(in_run[i].mean_inconsistent));
    }

    CHECK(fs::exists(first.manifest_path));
    fs::remove_all(config.out_dir);
    fs::remove_all(again.out_dir);
}

TEST_CASE("explicit thetas override sampling and snapshots are written") {
    ExperimentConfig config = tiny_config("explicit");
    config.explicit_thetas = {MechanismWeights{-0.18, 0.74, 0.37, -0.35, 0.42}};
    config.reps_per_theta = 1;
    config.rf_mode = RfMode::None;
    config.snapshots = true;
    const RunResult result = run_experiment(config);
    CHECK(result.records.size() == 2);  // one theta, one rep, two checkpoints
    CHECK(result.records[0].theta_id == 1);
    CHECK_FALSE(result.records[0].rf_core_cohesive.has_value());
    CHECK_FALSE(result.records[1].rf_core_cohesive.has_value());
    CHECK(fs::exists(fs::path(config.out_dir) / "1_1_20.csv"));
    CHECK(fs::exists(fs::path(config.out_dir) / "1_1_60.csv"));
    fs::remove_all(config.out_dir);
}

TEST_CASE("rf_mode all computes rf at every checkpoint") {
    ExperimentConfig config = tiny_config("rf_all");
    config.n_thetas = 1;
    config.reps_per_theta = 1;
    config.rf_mode = RfMode::All;
    const RunResult result = run_experiment(config);
    for (const SimulationRecord& r : result.records) {
        CHECK(r.rf_core_cohesive.has_value());
        CHECK(r.rf_cohesive.has_value());
        CHECK(r.rf_core_periphery.has_value());
    }
    fs::remove_all(config.out_dir);
}

TEST_CASE("the ingest pipeline agrees with binarize on a hand-built count matrix") {
    // exercised through the CLI when BLOCKNEM_CLI is set, otherwise skipped
    const char* cli = std::getenv("BLOCKNEM_CLI");
    if (cli == nullptr) return;

    const fs::path dir = temp_dir("ingest");
    fs::create_directories(dir);
    const fs::path counts_path = dir / "counts.csv";
    {
        std::ofstream out(counts_path);
        out << "0,3,0,1\n1,0,2,0\n0,6,0,9\n1,0,1,0\n";
    }
    // pair sums: (0,1)=4 (0,2)=0 (0,3)=2 (1,2)=8 (1,3)=0 (2,3)=10
    // median (2+4)/2 = 3, threshold 1.5: links at sums 2,4,8,10
    const fs::path out_path = dir / "net.csv";
    const std::string cmd = std::string("\"") + cli + "\" ingest " + counts_path.string() +
                            " --out " + out_path.string();
    REQUIRE(std::system(cmd.c_str()) == 0);
    std::ifstream in(out_path);
    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(body == "0,1,0,1\n1,0,1,0\n0,1,0,1\n1,0,1,0\n");
    fs::remove_all(dir);
}
