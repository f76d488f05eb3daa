#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blocknem/blockmodel.hpp"
#include "blocknem/network.hpp"
#include "blocknem/rng.hpp"

namespace blocknem {

enum class IdealKind {
    CoreCohesive,   // k >= 3: one core tied to everyone, cohesive groups otherwise
    Cohesive,       // k >= 2: complete diagonal, null off-diagonal
    CorePeriphery,  // k == 2: [[com, com], [com, null]]
};

const char* ideal_kind_name(IdealKind kind);
IdealKind ideal_kind_from_name(const std::string& name);

/// Ideal image for a blockmodel type; throws when k is out of bounds.
BlockImage ideal_image(IdealKind kind, int k);

/// Number of cells of `observed` that differ from `ideal`, minimized over
/// simultaneous row/column relabelings of the observed image.
int inconsistent_blocks(const BlockImage& observed, const BlockImage& ideal);

/// Uniform draw from the networks with the same n, directedness, and link
/// count as `net` (loop-free).
BinaryNetwork randomize(const BinaryNetwork& net, Rng& rng);

struct RfReport {
    IdealKind kind = IdealKind::CoreCohesive;
    int k = 0;
    int restarts = 0;
    long long p_empirical = 0;
    std::vector<long long> p_baseline;
    /// 1 - p_empirical / mean(p_baseline); nullopt when the baseline mean is
    /// zero but the empirical criterion is not (degenerate stratum).
    std::optional<double> rf;
};

/// Relative fit of `net` against the ideal image of the given type: the
/// pre-specified criterion on the network versus its mean over k_rand
/// density-matched randomizations, each fitted with its own restarts.
RfReport relative_fit(const BinaryNetwork& net, IdealKind kind, int k, int k_rand,
                      int restarts, Rng& rng);

/// Relative fit for a directed generated network, following the analysis
/// pipeline: the union-symmetrized network is scored against the
/// union-symmetrized randomizations of the directed network itself.
RfReport relative_fit_directed(const BinaryNetwork& directed_net, IdealKind kind, int k,
                               int k_rand, int restarts, Rng& rng);

std::string rf_report_json(const RfReport& report);

}  // namespace blocknem
