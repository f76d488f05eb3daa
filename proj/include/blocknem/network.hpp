#pragma once

#include <cstdint>
#include <vector>

namespace blocknem {

struct Degrees {
    std::vector<int> in;
    std::vector<int> out;
};

/// Square binary adjacency structure without loops. Undirected networks
/// store a symmetric matrix; set_link keeps the mirror cell in sync.
class BinaryNetwork {
public:
    BinaryNetwork(int n, bool directed);

    /// Build from a row-major 0/1 cell buffer. Validates: no loops,
    /// entries in {0,1}, and symmetry when undirected.
    static BinaryNetwork from_cells(int n, bool directed, std::vector<std::uint8_t> cells);

    int size() const noexcept { return n_; }
    bool directed() const noexcept { return directed_; }

    bool has_link(int i, int j) const { return adj_[static_cast<std::size_t>(i) * n_ + j] != 0; }
    void set_link(int i, int j, bool present);

    const std::uint8_t* row(int i) const { return adj_.data() + static_cast<std::size_t>(i) * n_; }
    const std::vector<std::uint8_t>& cells() const noexcept { return adj_; }

    /// Arcs for directed networks, edges for undirected ones.
    long long link_count() const;
    /// Number of 1-cells in the matrix (counts each undirected edge twice).
    long long ordered_link_cells() const;

    /// Fraction of realizable links that are present. Throws for n < 2.
    double density() const;

    Degrees degrees() const;

    bool operator==(const BinaryNetwork&) const = default;

private:
    int n_;
    bool directed_;
    std::vector<std::uint8_t> adj_;

    void check_pair(int i, int j) const;
};

/// Observed interaction counts; row = ego, column = alter. Diagonal is zero.
class CountNetwork {
public:
    explicit CountNetwork(int n);
    static CountNetwork from_cells(int n, std::vector<long long> cells);

    int size() const noexcept { return n_; }
    long long count(int i, int j) const { return c_[static_cast<std::size_t>(i) * n_ + j]; }
    void set_count(int i, int j, long long value);
    const std::vector<long long>& cells() const noexcept { return c_; }

private:
    int n_;
    std::vector<long long> c_;
};

/// Symmetrize counts by pairwise summation, then threshold at half the
/// median of the unordered-pair totals (strictly greater). Result is
/// undirected with a zero diagonal. Throws for n < 2.
BinaryNetwork binarize(const CountNetwork& counts);

/// Union rule: a tie exists if either direction has it. Undirected input
/// is returned unchanged, so the operation is idempotent.
BinaryNetwork symmetrize_union(const BinaryNetwork& net);

}  // namespace blocknem
