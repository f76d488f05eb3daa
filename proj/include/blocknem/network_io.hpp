#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blocknem/network.hpp"

namespace blocknem {

// CSV: n rows x n columns of integers, comma separated. A first row whose
// cells are not all numeric is treated as a header of unit labels.

CountNetwork read_counts_csv(const std::string& path);
void write_counts_csv(const CountNetwork& counts, const std::string& path);

/// Reads a 0/1 matrix. Unless `directed` is given, the network is marked
/// undirected when the matrix is symmetric.
BinaryNetwork read_network_csv(const std::string& path, std::optional<bool> directed = std::nullopt);
void write_network_csv(const BinaryNetwork& net, const std::string& path,
                       const std::vector<std::string>& labels = {});

// Minimal Pajek-style format: `*Vertices n`, then `*Arcs` (ordered pairs)
// and/or `*Edges` (unordered pairs), endpoints 1-based. A file with only
// an *Edges section yields an undirected network.
BinaryNetwork read_network_pajek(const std::string& path);
void write_network_pajek(const BinaryNetwork& net, const std::string& path);

/// Dispatches on content: Pajek when the first non-blank line starts
/// with '*', CSV otherwise.
BinaryNetwork read_network_auto(const std::string& path, std::optional<bool> directed = std::nullopt);

}  // namespace blocknem
