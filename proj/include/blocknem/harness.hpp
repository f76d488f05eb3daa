#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blocknem/mechanisms.hpp"
#include "blocknem/nem.hpp"

namespace blocknem {

enum class RfMode { None, Final, All };

const char* rf_mode_name(RfMode mode);
RfMode rf_mode_from_name(const std::string& name);

/// Full experiment grid: for every (theta, repetition) a trajectory is
/// generated from the empty directed network, symmetrized at each
/// checkpoint, blockmodeled, and scored.
struct ExperimentConfig {
    int n_thetas = 30;
    int reps_per_theta = 10;
    int n_units = 24;
    double q = 5.0 / 9.0;
    long long total_iterations = 116490;
    std::vector<long long> checkpoints;  // empty -> resolve_checkpoints default
    int restarts = 100;
    int k_clusters = 3;
    RfMode rf_mode = RfMode::Final;
    std::vector<int> rf_trace_thetas;  // theta ids that get RF at every checkpoint
    int rf_k_rand = 20;
    int rf_restarts = 0;  // 0 -> same as restarts
    std::uint64_t master_seed = 1;
    std::string out_dir = "out";
    int threads = 0;  // 0 -> hardware concurrency
    bool snapshots = false;
    std::vector<MechanismWeights> explicit_thetas;  // when non-empty, n_thetas is ignored

    void validate() const;
    std::vector<long long> resolved_checkpoints() const;
    int effective_rf_restarts() const { return rf_restarts > 0 ? rf_restarts : restarts; }
};

/// Plain `key = value` text; '#' starts a comment line; unknown keys are
/// errors. `theta = m,p,a,t,osp` lines may repeat to supply explicit
/// weight vectors.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// One (theta, repetition, checkpoint) measurement. RF fields are nullopt
/// when not computed; NaN marks a computed-but-undefined value (degenerate
/// randomization baseline).
struct SimulationRecord {
    int theta_id = 0;  // 1-based
    std::array<double, kMechanismCount> theta{};
    int rep = 0;  // 1-based
    long long iteration = 0;
    double density = 0.0;
    int inconsistent = 0;  // vs the core-cohesive image with k_clusters groups
    std::optional<double> rf_core_cohesive;
    std::optional<double> rf_cohesive;
    std::optional<double> rf_core_periphery;
};

struct RunResult {
    std::vector<SimulationRecord> records;  // in (theta, rep, checkpoint) order
    std::vector<std::string> failures;      // per-trajectory error notes
    std::string records_path;
    std::string manifest_path;
};

RunResult run_experiment(const ExperimentConfig& config);

// records.csv round trip. Columns: theta_id, rep, iter, density,
// inconsistent_blocks, rf_core_cohesive, rf_cohesive, rf_core_periphery.
std::string record_csv_header();
std::string record_to_csv(const SimulationRecord& r);
std::vector<SimulationRecord> read_records_csv(const std::string& path);

/// Per-(theta, checkpoint) means over repetitions. RF means skip missing
/// and undefined values.
struct SummaryRow {
    int theta_id = 0;
    long long iteration = 0;
    int n_reps = 0;
    double mean_density = 0.0;
    double mean_inconsistent = 0.0;
    std::optional<double> mean_rf_core_cohesive;
    std::optional<double> mean_rf_cohesive;
    std::optional<double> mean_rf_core_periphery;
};

std::vector<SummaryRow> summarize(const std::vector<SimulationRecord>& records);

std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string summary_json(const std::vector<SummaryRow>& rows);

}  // namespace blocknem
