#pragma once

#include <cstdint>
#include <vector>

#include "blocknem/mechanisms.hpp"
#include "blocknem/network.hpp"
#include "blocknem/rng.hpp"

namespace blocknem {

/// Parameters of one generator trajectory.
struct GeneratorConfig {
    double q = 5.0 / 9.0;           // per-step probability of creating (vs dissolving) a tie
    long long iterations = 116490;  // total steps
    int n = 24;                     // unit count, >= 4
    std::uint64_t seed = 1;

    void validate() const;
};

struct CheckpointSchedule {
    std::vector<long long> points;  // strictly increasing

    void validate(long long total_iterations) const;
};

/// Geometric snapshot schedule: point i is round(m1 * growth^(i-1)), kept
/// while <= total; the total itself is always the last point.
CheckpointSchedule geometric_checkpoints(long long m1, double growth, long long total);

/// The fixed 12-point schedule used by full-length (116,490-step) runs.
const std::vector<long long>& default_full_checkpoints();

/// Explicit override when non-empty, otherwise the default schedule for
/// `total`: the fixed full-run list when total == 116490, else a geometric
/// schedule growing by 1.9 from 100.
CheckpointSchedule resolve_checkpoints(long long total, const std::vector<long long>& override_points);

/// Unit-norm weight vector: five standard normal draws divided by their
/// Euclidean norm (redrawn in the measure-zero all-zero case).
MechanismWeights sample_theta(Rng& rng);

/// Normalizes an arbitrary 5-vector to unit Euclidean norm.
MechanismWeights normalize_theta(const std::array<double, kMechanismCount>& raw);

/// Linear interpolation between order statistics (inclusive endpoints).
/// `sorted` must be ascending and non-empty; p in [0,1].
double interpolated_quantile(const std::vector<double>& sorted, double p);

/// The candidate sets of one update for a given focal unit: C holds alters
/// whose score is >= the third quartile, F those <= the first quartile.
/// Both are non-empty for every score vector.
struct StepCandidates {
    int focal = 0;
    std::vector<int> candidates;    // all j != focal
    std::vector<double> scores;     // phi, aligned with candidates
    double q1 = 0.0;
    double q3 = 0.0;
    std::vector<int> create_set;    // C (unit ids)
    std::vector<int> dissolve_set;  // F (unit ids)
};

StepCandidates step_candidates(const BinaryNetwork& x, int focal, const MechanismWeights& theta);

/// One update: pick a focal unit uniformly, then with probability q create
/// an arc to a uniform member of C, otherwise remove the arc to a uniform
/// member of F. At most one cell changes, always in the focal unit's row.
void nem_step_inplace(BinaryNetwork& x, const MechanismWeights& theta, double q, Rng& rng);

BinaryNetwork nem_step(const BinaryNetwork& x, const MechanismWeights& theta, double q, Rng& rng);

struct Snapshot {
    long long iteration;
    BinaryNetwork network;
};

struct GenerateResult {
    std::vector<Snapshot> snapshots;
    BinaryNetwork final_network;
};

/// Runs `config.iterations` updates from `initial`, snapshotting the state
/// at each scheduled iteration. Deterministic given config.seed.
GenerateResult generate(const GeneratorConfig& config, const MechanismWeights& theta,
                        const CheckpointSchedule& schedule, const BinaryNetwork& initial);

}  // namespace blocknem
