#include "blocknem/harness.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "blocknem/fitmetrics.hpp"
#include "blocknem/network_io.hpp"

namespace fs = std::filesystem;

namespace blocknem {

const char* rf_mode_name(RfMode mode) {
    switch (mode) {
        case RfMode::None: return "none";
        case RfMode::Final: return "final";
        case RfMode::All: return "all";
    }
    throw std::invalid_argument("unknown rf mode");
}

RfMode rf_mode_from_name(const std::string& name) {
    if (name == "none") return RfMode::None;
    if (name == "final") return RfMode::Final;
    if (name == "all") return RfMode::All;
    throw std::invalid_argument("unknown rf mode: " + name);
}

void ExperimentConfig::validate() const {
    if (explicit_thetas.empty() && n_thetas < 1)
        throw std::invalid_argument("config: n_thetas must be positive");
    if (reps_per_theta < 1) throw std::invalid_argument("config: reps_per_theta must be positive");
    if (n_units < 4) throw std::invalid_argument("config: n_units must be at least 4");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("config: q must lie in [0,1]");
    if (total_iterations < 1) throw std::invalid_argument("config: total_iterations must be positive");
    if (restarts < 1) throw std::invalid_argument("config: restarts must be positive");
    if (k_clusters < 3)
        throw std::invalid_argument("config: k_clusters must be at least 3 (core-cohesive image)");
    if (k_clusters > n_units) throw std::invalid_argument("config: k_clusters exceeds n_units");
    if (rf_k_rand < 1) throw std::invalid_argument("config: rf_k_rand must be positive");
    if (rf_restarts < 0) throw std::invalid_argument("config: rf_restarts must be non-negative");
    if (threads < 0) throw std::invalid_argument("config: threads must be non-negative");
    resolved_checkpoints();  // validates checkpoint list against total_iterations
}

std::vector<long long> ExperimentConfig::resolved_checkpoints() const {
    return resolve_checkpoints(total_iterations, checkpoints).points;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

long long parse_ll(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(value, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != value.size()) throw std::invalid_argument("config: bad integer for " + key + ": " + value);
    return v;
}

// accepts decimals and a/b fractions, e.g. "5/9"
double parse_real(const std::string& key, const std::string& value) {
    const auto slash = value.find('/');
    try {
        if (slash != std::string::npos) {
            const double num = std::stod(trim(value.substr(0, slash)));
            const double den = std::stod(trim(value.substr(slash + 1)));
            if (den == 0.0) throw std::invalid_argument("zero denominator");
            return num / den;
        }
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number for " + key + ": " + value);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument("config: bad boolean for " + key + ": " + value);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));

        if (key == "n_thetas") {
            config.n_thetas = static_cast<int>(parse_ll(key, value));
        } else if (key == "reps_per_theta") {
            config.reps_per_theta = static_cast<int>(parse_ll(key, value));
        } else if (key == "n_units") {
            config.n_units = static_cast<int>(parse_ll(key, value));
        } else if (key == "q") {
            config.q = parse_real(key, value);
        } else if (key == "total_iterations") {
            config.total_iterations = parse_ll(key, value);
        } else if (key == "checkpoints") {
            config.checkpoints.clear();
            for (const std::string& f : split(value, ','))
                if (!f.empty()) config.checkpoints.push_back(parse_ll(key, f));
        } else if (key == "restarts") {
            config.restarts = static_cast<int>(parse_ll(key, value));
        } else if (key == "k_clusters") {
            config.k_clusters = static_cast<int>(parse_ll(key, value));
        } else if (key == "rf_mode") {
            config.rf_mode = rf_mode_from_name(value);
        } else if (key == "rf_trace_thetas") {
            config.rf_trace_thetas.clear();
            for (const std::string& f : split(value, ','))
                if (!f.empty()) config.rf_trace_thetas.push_back(static_cast<int>(parse_ll(key, f)));
        } else if (key == "rf_k_rand") {
            config.rf_k_rand = static_cast<int>(parse_ll(key, value));
        } else if (key == "rf_restarts") {
            config.rf_restarts = static_cast<int>(parse_ll(key, value));
        } else if (key == "master_seed") {
            config.master_seed = static_cast<std::uint64_t>(parse_ll(key, value));
        } else if (key == "out_dir") {
            config.out_dir = value;
        } else if (key == "threads") {
            config.threads = static_cast<int>(parse_ll(key, value));
        } else if (key == "snapshots") {
            config.snapshots = parse_bool(key, value);
        } else if (key == "theta") {
            const std::vector<std::string> parts = split(value, ',');
            if (parts.size() != kMechanismCount)
                throw std::invalid_argument("config: theta needs five components: " + value);
            std::array<double, kMechanismCount> w{};
            for (int m = 0; m < kMechanismCount; ++m) w[m] = parse_real(key, parts[m]);
            config.explicit_thetas.push_back(MechanismWeights::from_array(w));
        } else {
            throw std::invalid_argument("config: unknown key: " + key);
        }
    }
    return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string rf_field(const std::optional<double>& rf) {
    if (!rf) return "";
    if (std::isnan(*rf)) return "NA";
    return format_double(*rf);
}

std::optional<double> parse_rf_field(const std::string& field) {
    if (field.empty()) return std::nullopt;
    if (field == "NA") return std::numeric_limits<double>::quiet_NaN();
    return std::stod(field);
}

}  // namespace

std::string record_csv_header() {
    return "theta_id,rep,iter,density,inconsistent_blocks,rf_core_cohesive,rf_cohesive,rf_core_periphery";
}

std::string record_to_csv(const SimulationRecord& r) {
    std::ostringstream out;
    out << r.theta_id << ',' << r.rep << ',' << r.iteration << ',' << format_double(r.density) << ','
        << r.inconsistent << ',' << rf_field(r.rf_core_cohesive) << ',' << rf_field(r.rf_cohesive)
        << ',' << rf_field(r.rf_core_periphery);
    return out.str();
}

std::vector<SimulationRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open records file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty records file: " + path);
    if (trim(line) != record_csv_header())
        throw std::runtime_error("unexpected records header in " + path);
    std::vector<SimulationRecord> records;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 8) throw std::runtime_error("malformed record row in " + path + ": " + line);
        SimulationRecord r;
        r.theta_id = static_cast<int>(std::stoll(f[0]));
        r.rep = static_cast<int>(std::stoll(f[1]));
        r.iteration = std::stoll(f[2]);
        r.density = std::stod(f[3]);
        r.inconsistent = static_cast<int>(std::stoll(f[4]));
        r.rf_core_cohesive = parse_rf_field(f[5]);
        r.rf_cohesive = parse_rf_field(f[6]);
        r.rf_core_periphery = parse_rf_field(f[7]);
        records.push_back(r);
    }
    return records;
}

namespace {

struct TrajectoryTask {
    int theta_idx;  // 0-based
    int rep;        // 1-based
};

std::optional<double> rf_as_record_field(const RfReport& report) {
    if (report.rf) return *report.rf;
    return std::numeric_limits<double>::quiet_NaN();  // computed but undefined
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const std::vector<long long> checkpoints = config.resolved_checkpoints();

    std::vector<MechanismWeights> thetas = config.explicit_thetas;
    if (thetas.empty()) {
        Rng theta_rng(derive_seed(config.master_seed, 0, 0));
        thetas.reserve(config.n_thetas);
        for (int t = 0; t < config.n_thetas; ++t) thetas.push_back(sample_theta(theta_rng));
    }

    fs::create_directories(config.out_dir);
    const fs::path records_path = fs::path(config.out_dir) / "records.csv";
    const fs::path manifest_path = fs::path(config.out_dir) / "manifest.json";

    {
        nlohmann::json manifest;
        manifest["config"] = {
            {"n_thetas", static_cast<int>(thetas.size())},
            {"reps_per_theta", config.reps_per_theta},
            {"n_units", config.n_units},
            {"q", config.q},
            {"total_iterations", config.total_iterations},
            {"restarts", config.restarts},
            {"k_clusters", config.k_clusters},
            {"rf_mode", rf_mode_name(config.rf_mode)},
            {"rf_trace_thetas", config.rf_trace_thetas},
            {"rf_k_rand", config.rf_k_rand},
            {"rf_restarts", config.effective_rf_restarts()},
            {"master_seed", config.master_seed},
            {"snapshots", config.snapshots},
        };
        manifest["checkpoints"] = checkpoints;
        nlohmann::json theta_list = nlohmann::json::array();
        for (std::size_t t = 0; t < thetas.size(); ++t) {
            const auto w = thetas[t].as_array();
            theta_list.push_back({{"id", static_cast<int>(t) + 1},
                                  {"mutuality", w[0]},
                                  {"popularity", w[1]},
                                  {"assortativity", w[2]},
                                  {"transitivity", w[3]},
                                  {"osp", w[4]}});
        }
        manifest["thetas"] = theta_list;
        manifest["records_file"] = "records.csv";
        std::ofstream out(manifest_path);
        if (!out) throw std::runtime_error("cannot write file: " + manifest_path.string());
        out << manifest.dump(2) << '\n';
    }

    std::ofstream records_file(records_path, std::ios::binary);
    if (!records_file) throw std::runtime_error("cannot write file: " + records_path.string());
    records_file << record_csv_header() << '\n';

    std::vector<TrajectoryTask> tasks;
    tasks.reserve(thetas.size() * config.reps_per_theta);
    for (std::size_t t = 0; t < thetas.size(); ++t)
        for (int rep = 1; rep <= config.reps_per_theta; ++rep)
            tasks.push_back({static_cast<int>(t), rep});

    std::vector<std::vector<SimulationRecord>> per_task(tasks.size());
    std::vector<std::string> failures;
    std::mutex io_mutex;
    std::atomic<std::size_t> next_task{0};

    const auto want_trace = [&config](int theta_id) {
        for (const int id : config.rf_trace_thetas)
            if (id == theta_id) return true;
        return false;
    };

    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next_task.fetch_add(1);
            if (idx >= tasks.size()) return;
            const TrajectoryTask task = tasks[idx];
            const int theta_id = task.theta_idx + 1;
            try {
                const MechanismWeights& theta = thetas[task.theta_idx];
                const std::uint64_t traj_seed =
                    derive_seed(config.master_seed, static_cast<std::uint64_t>(theta_id),
                                static_cast<std::uint64_t>(task.rep));

                GeneratorConfig gen_config;
                gen_config.q = config.q;
                gen_config.iterations = config.total_iterations;
                gen_config.n = config.n_units;
                gen_config.seed = traj_seed;
                CheckpointSchedule schedule;
                schedule.points = checkpoints;
                const BinaryNetwork initial(config.n_units, true);
                const GenerateResult trajectory = generate(gen_config, theta, schedule, initial);

                std::vector<SimulationRecord> rows;
                rows.reserve(trajectory.snapshots.size());
                const BlockImage target = ideal_image(IdealKind::CoreCohesive, config.k_clusters);
                for (std::size_t s = 0; s < trajectory.snapshots.size(); ++s) {
                    const Snapshot& snap = trajectory.snapshots[s];
                    const BinaryNetwork analyzed = symmetrize_union(snap.network);

                    Rng fit_rng(derive_seed(traj_seed, static_cast<std::uint64_t>(snap.iteration), 1));
                    const BlockmodelFit fit =
                        fit_blockmodel(analyzed, config.k_clusters, config.restarts, std::nullopt, fit_rng);

                    SimulationRecord r;
                    r.theta_id = theta_id;
                    r.theta = theta.as_array();
                    r.rep = task.rep;
                    r.iteration = snap.iteration;
                    r.density = analyzed.density();
                    r.inconsistent = inconsistent_blocks(fit.image, target);

                    const bool last = s + 1 == trajectory.snapshots.size();
                    const bool rf_here = config.rf_mode == RfMode::All ||
                                         (config.rf_mode == RfMode::Final && last) ||
                                         (config.rf_mode != RfMode::None && want_trace(theta_id));
                    if (rf_here) {
                        const int rf_restarts = config.effective_rf_restarts();
                        struct Slot {
                            IdealKind kind;
                            int k;
                            std::optional<double> SimulationRecord::* field;
                        };
                        const Slot slots[3] = {
                            {IdealKind::CoreCohesive, config.k_clusters, &SimulationRecord::rf_core_cohesive},
                            {IdealKind::Cohesive, config.k_clusters, &SimulationRecord::rf_cohesive},
                            {IdealKind::CorePeriphery, 2, &SimulationRecord::rf_core_periphery},
                        };
                        for (int slot = 0; slot < 3; ++slot) {
                            Rng rf_rng(derive_seed(traj_seed, static_cast<std::uint64_t>(snap.iteration),
                                                   static_cast<std::uint64_t>(2 + slot)));
                            const RfReport report =
                                relative_fit_directed(snap.network, slots[slot].kind, slots[slot].k,
                                                      config.rf_k_rand, rf_restarts, rf_rng);
                            r.*(slots[slot].field) = rf_as_record_field(report);
                        }
                    }
                    rows.push_back(r);

                    if (config.snapshots) {
                        const fs::path snap_path =
                            fs::path(config.out_dir) / (std::to_string(theta_id) + "_" +
                                                        std::to_string(task.rep) + "_" +
                                                        std::to_string(snap.iteration) + ".csv");
                        write_network_csv(snap.network, snap_path.string());
                    }
                }

                {
                    std::lock_guard<std::mutex> lock(io_mutex);
                    for (const SimulationRecord& r : rows) records_file << record_to_csv(r) << '\n';
                    records_file.flush();
                }
                per_task[idx] = std::move(rows);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(io_mutex);
                failures.push_back("theta " + std::to_string(theta_id) + " rep " +
                                   std::to_string(task.rep) + ": " + e.what());
            }
        }
    };

    int thread_count = config.threads;
    if (thread_count == 0) thread_count = static_cast<int>(std::thread::hardware_concurrency());
    if (thread_count < 1) thread_count = 1;
    thread_count = std::min<int>(thread_count, static_cast<int>(tasks.size()));

    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    RunResult result;
    result.records_path = records_path.string();
    result.manifest_path = manifest_path.string();
    for (std::vector<SimulationRecord>& rows : per_task)
        result.records.insert(result.records.end(), rows.begin(), rows.end());
    result.failures = std::move(failures);
    if (!result.failures.empty()) {
        std::ofstream log(fs::path(config.out_dir) / "failures.log");
        for (const std::string& f : result.failures) log << f << '\n';
    }
    return result;
}

namespace {

struct Accumulator {
    int n = 0;
    double density_sum = 0.0;
    double inconsistent_sum = 0.0;
    int rf_cc_n = 0, rf_coh_n = 0, rf_cp_n = 0;
    double rf_cc_sum = 0.0, rf_coh_sum = 0.0, rf_cp_sum = 0.0;
};

void add_rf(const std::optional<double>& rf, int& count, double& sum) {
    if (rf && !std::isnan(*rf)) {
        ++count;
        sum += *rf;
    }
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<SimulationRecord>& records) {
    std::map<std::pair<int, long long>, Accumulator> groups;
    for (const SimulationRecord& r : records) {
        Accumulator& a = groups[{r.theta_id, r.iteration}];
        ++a.n;
        a.density_sum += r.density;
        a.inconsistent_sum += r.inconsistent;
        add_rf(r.rf_core_cohesive, a.rf_cc_n, a.rf_cc_sum);
        add_rf(r.rf_cohesive, a.rf_coh_n, a.rf_coh_sum);
        add_rf(r.rf_core_periphery, a.rf_cp_n, a.rf_cp_sum);
    }
    std::vector<SummaryRow> rows;
    rows.reserve(groups.size());
    for (const auto& [key, a] : groups) {
        SummaryRow row;
        row.theta_id = key.first;
        row.iteration = key.second;
        row.n_reps = a.n;
        row.mean_density = a.density_sum / a.n;
        row.mean_inconsistent = a.inconsistent_sum / a.n;
        if (a.rf_cc_n) row.mean_rf_core_cohesive = a.rf_cc_sum / a.rf_cc_n;
        if (a.rf_coh_n) row.mean_rf_cohesive = a.rf_coh_sum / a.rf_coh_n;
        if (a.rf_cp_n) row.mean_rf_core_periphery = a.rf_cp_sum / a.rf_cp_n;
        rows.push_back(row);
    }
    return rows;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "theta_id,iter,n_reps,mean_density,mean_inconsistent,"
           "mean_rf_core_cohesive,mean_rf_cohesive,mean_rf_core_periphery\n";
    auto opt_field = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string();
    };
    for (const SummaryRow& r : rows) {
        out << r.theta_id << ',' << r.iteration << ',' << r.n_reps << ','
            << format_double(r.mean_density) << ',' << format_double(r.mean_inconsistent) << ','
            << opt_field(r.mean_rf_core_cohesive) << ',' << opt_field(r.mean_rf_cohesive) << ','
            << opt_field(r.mean_rf_core_periphery) << '\n';
    }
    return out.str();
}

std::string summary_json(const std::vector<SummaryRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    auto opt_json = [](const std::optional<double>& v) {
        return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    for (const SummaryRow& r : rows) {
        arr.push_back({{"theta_id", r.theta_id},
                       {"iter", r.iteration},
                       {"n_reps", r.n_reps},
                       {"mean_density", r.mean_density},
                       {"mean_inconsistent", r.mean_inconsistent},
                       {"mean_rf_core_cohesive", opt_json(r.mean_rf_core_cohesive)},
                       {"mean_rf_cohesive", opt_json(r.mean_rf_cohesive)},
                       {"mean_rf_core_periphery", opt_json(r.mean_rf_core_periphery)}});
    }
    return arr.dump(2);
}

}  // namespace blocknem
