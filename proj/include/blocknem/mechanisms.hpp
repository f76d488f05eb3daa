#pragma once

#include <array>
#include <vector>

#include "blocknem/network.hpp"

namespace blocknem {

inline constexpr int kMechanismCount = 5;

enum Mechanism : int {
    kMutuality = 0,
    kPopularity = 1,
    kAssortativity = 2,
    kTransitivity = 3,
    kOsp = 4,
};

/// Weight vector over the five tie-formation mechanisms.
struct MechanismWeights {
    double mutuality = 0.0;
    double popularity = 0.0;
    double assortativity = 0.0;
    double transitivity = 0.0;
    double osp = 0.0;

    std::array<double, kMechanismCount> as_array() const {
        return {mutuality, popularity, assortativity, transitivity, osp};
    }
    static MechanismWeights from_array(const std::array<double, kMechanismCount>& a) {
        return {a[0], a[1], a[2], a[3], a[4]};
    }
};

/// Per-alter statistics for one focal unit. Rows are aligned with
/// `candidates`, which lists every alter except the focal unit itself.
///
/// Raw definitions, for candidate j of focal unit i:
///   mutuality      adj[j][i]
///   popularity     in-degree(j)
///   assortativity  -|in-degree(i) - in-degree(j)|
///   transitivity   #{k != i,j : i->k and k->j}
///   osp            #{k != i,j : i->k and j->k}
struct MechanismStats {
    int focal = 0;
    std::vector<int> candidates;
    std::array<std::vector<double>, kMechanismCount> raw;
    std::array<std::vector<double>, kMechanismCount> normalized;
};

/// Raw statistics only (no normalization). Throws when focal is out of range.
MechanismStats raw_stats(const BinaryNetwork& net, int focal);

/// Min-max scaling to [0,1]; a constant row maps to all zeros.
/// Throws when the row has fewer than two entries.
std::vector<double> normalize_row(const std::vector<double>& raw);

/// Raw plus normalized statistics. Requires at least two candidates.
MechanismStats mechanism_stats(const BinaryNetwork& net, int focal);

/// Weighted sum of the normalized statistics, aligned with
/// mechanism_stats(net, focal).candidates.
std::vector<double> phi(const BinaryNetwork& net, int focal, const MechanismWeights& theta);

}  // namespace blocknem
