#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blocknem/network.hpp"
#include "blocknem/rng.hpp"

namespace blocknem {

enum class BlockType : std::uint8_t { Null = 0, Complete = 1 };

const char* block_type_name(BlockType t);                // "null" / "com"
BlockType block_type_from_name(const std::string& name);

/// k x k matrix of block types: the blockmodel image.
struct BlockImage {
    int k = 0;
    std::vector<BlockType> cells;  // row-major k*k

    BlockImage() = default;
    BlockImage(int k_, BlockType fill);

    BlockType at(int g, int h) const { return cells[static_cast<std::size_t>(g) * k + h]; }
    void set(int g, int h, BlockType t) { cells[static_cast<std::size_t>(g) * k + h] = t; }

    bool operator==(const BlockImage&) const = default;
};

/// Assignment of n units to k clusters, every cluster non-empty.
struct Partition {
    std::vector<int> labels;
    int k = 0;

    void validate() const;  // throws when a cluster is empty or a label is out of range
    std::vector<int> cluster_sizes() const;

    /// The first k units go to distinct clusters, the rest are uniform.
    static Partition random(int n, int k, Rng& rng);

    /// Uniform over cluster-size compositions, then random membership.
    /// Reaches very unbalanced shapes that per-unit sampling almost never
    /// produces.
    static Partition random_composition(int n, int k, Rng& rng);

    /// True when the two label vectors agree up to a relabeling of clusters.
    bool same_up_to_relabeling(const Partition& other) const;
};

struct BlockErrors {
    long long null_error = 0;      // 1-cells (inconsistent with an ideal null block)
    long long complete_error = 0;  // 0-cells (inconsistent with an ideal complete block)
};

/// Counts inconsistencies over the ordered cells of block (g, h); diagonal
/// cells are excluded (loops are structurally impossible).
BlockErrors block_errors(const BinaryNetwork& net, const Partition& p, int g, int h);

struct CriterionResult {
    long long criterion = 0;
    BlockImage image;                      // chosen (or prescribed) types
    std::vector<long long> block_errors;   // row-major k*k, error of the chosen type
};

/// Criterion function under structural equivalence. Without an image each
/// block takes the cheaper of null/complete (ties go to null); with one,
/// the prescribed type's error counts.
CriterionResult evaluate_criterion(const BinaryNetwork& net, const Partition& p,
                                   const std::optional<BlockImage>& image = std::nullopt);

/// Min-error block type per cell; ties classify as null.
BlockImage classify_blocks(const BinaryNetwork& net, const Partition& p);

struct BlockmodelFit {
    Partition partition;
    BlockImage image;
    long long criterion = 0;
    std::vector<long long> block_errors;  // row-major k*k
};

/// Multi-restart steepest-descent local search over single-unit relocations
/// and pairwise exchanges. Each restart starts from a random partition and
/// runs to a local optimum; the best restart wins, first found on ties.
BlockmodelFit fit_blockmodel(const BinaryNetwork& net, int k, int restarts,
                             const std::optional<BlockImage>& image, Rng& rng);

std::string fit_report_json(const BlockmodelFit& fit);

}  // namespace blocknem
