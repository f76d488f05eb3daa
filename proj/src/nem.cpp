#include "blocknem/nem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blocknem {

void GeneratorConfig::validate() const {
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("GeneratorConfig: q must lie in [0,1]");
    if (iterations < 1) throw std::invalid_argument("GeneratorConfig: iterations must be positive");
    if (n < 4) throw std::invalid_argument("GeneratorConfig: need at least four units");
}

void CheckpointSchedule::validate(long long total_iterations) const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i] < 1) throw std::invalid_argument("CheckpointSchedule: points must be positive");
        if (i > 0 && points[i] <= points[i - 1])
            throw std::invalid_argument("CheckpointSchedule: points must be strictly increasing");
    }
    if (!points.empty() && points.back() > total_iterations)
        throw std::invalid_argument("CheckpointSchedule: point exceeds total iterations");
}

CheckpointSchedule geometric_checkpoints(long long m1, double growth, long long total) {
    if (m1 < 1) throw std::invalid_argument("geometric_checkpoints: m1 must be positive");
    if (!(growth > 1.0)) throw std::invalid_argument("geometric_checkpoints: growth must exceed 1");
    if (total < m1) throw std::invalid_argument("geometric_checkpoints: total below first point");

    CheckpointSchedule schedule;
    // Round half up on the exact geometric value; rounding is not chained,
    // so the final total itself is a point of the default full-run series.
    double exact = static_cast<double>(m1);
    long long point = m1;
    while (point <= total) {
        if (schedule.points.empty() || point != schedule.points.back())
            schedule.points.push_back(point);
        exact *= growth;
        point = static_cast<long long>(std::floor(exact + 0.5));
    }
    if (schedule.points.back() != total) schedule.points.push_back(total);
    return schedule;
}

const std::vector<long long>& default_full_checkpoints() {
    static const std::vector<long long> points = {100,  190,   361,   686,   1303,  2478,
                                                  4705, 8939,  16948, 32969, 61311, 116490};
    return points;
}

CheckpointSchedule resolve_checkpoints(long long total, const std::vector<long long>& override_points) {
    CheckpointSchedule schedule;
    if (!override_points.empty()) {
        schedule.points = override_points;
    } else if (total == 116490) {
        schedule.points = default_full_checkpoints();
    } else if (total >= 100) {
        schedule = geometric_checkpoints(100, 1.9, total);
    } else {
        schedule.points = {total};
    }
    schedule.validate(total);
    return schedule;
}

MechanismWeights normalize_theta(const std::array<double, kMechanismCount>& raw) {
    double sq = 0.0;
    for (const double v : raw) sq += v * v;
    if (sq == 0.0) throw std::invalid_argument("normalize_theta: zero vector");
    const double norm = std::sqrt(sq);
    std::array<double, kMechanismCount> unit{};
    for (int m = 0; m < kMechanismCount; ++m) unit[m] = raw[m] / norm;
    return MechanismWeights::from_array(unit);
}

MechanismWeights sample_theta(Rng& rng) {
    for (;;) {
        std::array<double, kMechanismCount> draw{};
        double sq = 0.0;
        for (double& v : draw) {
            v = rng.normal();
            sq += v * v;
        }
        if (sq > 0.0) return normalize_theta(draw);
    }
}

double interpolated_quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("interpolated_quantile: empty input");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("interpolated_quantile: p outside [0,1]");
    const std::size_t m = sorted.size();
    const double h = p * static_cast<double>(m - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= m) return sorted[m - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

StepCandidates step_candidates(const BinaryNetwork& x, int focal, const MechanismWeights& theta) {
    StepCandidates sc;
    sc.focal = focal;
    MechanismStats stats = mechanism_stats(x, focal);
    sc.candidates = std::move(stats.candidates);
    const std::array<double, kMechanismCount> w = theta.as_array();
    sc.scores.assign(sc.candidates.size(), 0.0);
    for (int m = 0; m < kMechanismCount; ++m)
        for (std::size_t idx = 0; idx < sc.scores.size(); ++idx)
            sc.scores[idx] += w[m] * stats.normalized[m][idx];

    std::vector<double> sorted = sc.scores;
    std::sort(sorted.begin(), sorted.end());
    sc.q1 = interpolated_quantile(sorted, 0.25);
    sc.q3 = interpolated_quantile(sorted, 0.75);
    // Clamp interpolation rounding so the extreme scores always qualify.
    sc.q3 = std::min(sc.q3, sorted.back());
    sc.q1 = std::max(sc.q1, sorted.front());

    for (std::size_t idx = 0; idx < sc.scores.size(); ++idx) {
        if (sc.scores[idx] >= sc.q3) sc.create_set.push_back(sc.candidates[idx]);
        if (sc.scores[idx] <= sc.q1) sc.dissolve_set.push_back(sc.candidates[idx]);
    }
    return sc;
}

void nem_step_inplace(BinaryNetwork& x, const MechanismWeights& theta, double q, Rng& rng) {
    if (x.size() < 4) throw std::invalid_argument("nem_step: need at least four units");
    if (!x.directed()) throw std::invalid_argument("nem_step: network must be directed");
    const int focal = rng.uniform_int(x.size());
    const StepCandidates sc = step_candidates(x, focal, theta);
    if (rng.uniform01() < q) {
        const int j = sc.create_set[rng.uniform_int(static_cast<int>(sc.create_set.size()))];
        x.set_link(focal, j, true);
    } else {
        const int j = sc.dissolve_set[rng.uniform_int(static_cast<int>(sc.dissolve_set.size()))];
        x.set_link(focal, j, false);
    }
}

BinaryNetwork nem_step(const BinaryNetwork& x, const MechanismWeights& theta, double q, Rng& rng) {
    BinaryNetwork next = x;
    nem_step_inplace(next, theta, q, rng);
    return next;
}

GenerateResult generate(const GeneratorConfig& config, const MechanismWeights& theta,
                        const CheckpointSchedule& schedule, const BinaryNetwork& initial) {
    config.validate();
    schedule.validate(config.iterations);
    if (initial.size() != config.n)
        throw std::invalid_argument("generate: initial network size does not match config");
    if (!initial.directed()) throw std::invalid_argument("generate: initial network must be directed");

    Rng rng(config.seed);
    GenerateResult result{{}, initial};
    result.snapshots.reserve(schedule.points.size());
    std::size_t next_point = 0;
    for (long long step = 1; step <= config.iterations; ++step) {
        nem_step_inplace(result.final_network, theta, config.q, rng);
        if (next_point < schedule.points.size() && step == schedule.points[next_point]) {
            result.snapshots.push_back({step, result.final_network});
            ++next_point;
        }
    }
    return result;
}

}  // namespace blocknem
