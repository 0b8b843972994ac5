#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "otdr/types.hpp"

namespace otdr {

// Disjoint index sets over an m-by-n grid, stored CSR-style: cells holds the
// (row, col) pairs of all groups back to back, offsets delimits each group.
// Cells not covered by any group are simply unregularized.
struct GroupPartition {
  using Cell = std::pair<std::int32_t, std::int32_t>;

  Index rows = 0, cols = 0;
  std::vector<Cell> cells;
  std::vector<std::size_t> offsets{0};

  std::size_t num_groups() const { return offsets.size() - 1; }
  std::span<const Cell> group(std::size_t g) const {
    return {cells.data() + offsets[g], offsets[g + 1] - offsets[g]};
  }
};

// Validates bounds and disjointness (throws std::invalid_argument).
GroupPartition make_partition(Index rows, Index cols,
                              const std::vector<std::vector<GroupPartition::Cell>>& groups);

// The domain-adaptation grouping: one group per (target column, source class),
// containing the rows of that class in that column. Column-major group order.
GroupPartition column_class_blocks(const std::vector<int>& row_labels, Index cols);

}  // namespace otdr
