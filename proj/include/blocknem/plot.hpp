#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blocknem/blockmodel.hpp"
#include "blocknem/network.hpp"

namespace blocknem {

/// Units reordered by cluster (ascending label, stable by unit index).
std::vector<int> cluster_order(const Partition& p);

// Permuted adjacency matrix plots: black cell = link, thin divider lines
// between clusters, outer frame. Without a partition the matrix is drawn
// in unit order with no dividers.

void write_matrix_pbm(const BinaryNetwork& net, const std::optional<Partition>& p,
                      const std::string& path, int cell_px = 8);

void write_matrix_svg(const BinaryNetwork& net, const std::optional<Partition>& p,
                      const std::string& path, int cell_px = 12);

}  // namespace blocknem
