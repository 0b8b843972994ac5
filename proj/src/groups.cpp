#include "otdr/groups.hpp"

#include <stdexcept>
#include <string>

namespace otdr {

GroupPartition make_partition(
    Index rows, Index cols,
    const std::vector<std::vector<GroupPartition::Cell>>& groups) {
  GroupPartition part;
  part.rows = rows;
  part.cols = cols;
  std::vector<char> seen(static_cast<std::size_t>(rows * cols), 0);
  for (const auto& group : groups) {
    for (auto [i, j] : group) {
      if (i < 0 || i >= rows || j < 0 || j >= cols) {
        throw std::invalid_argument("group cell (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") outside " +
                                    std::to_string(rows) + "x" +
                                    std::to_string(cols) + " grid");
      }
      auto flat = static_cast<std::size_t>(i) * cols + j;
      if (seen[flat]) {
        throw std::invalid_argument("group cell (" + std::to_string(i) + "," +
                                    std::to_string(j) +
                                    ") appears in more than one group");
      }
      seen[flat] = 1;
      part.cells.emplace_back(i, j);
    }
    part.offsets.push_back(part.cells.size());
  }
  return part;
}

GroupPartition column_class_blocks(const std::vector<int>& row_labels,
                                   Index cols) {
  if (row_labels.empty()) throw std::invalid_argument("no row labels");
  if (cols < 1) throw std::invalid_argument("need at least one column");
  int num_classes = 0;
  for (int label : row_labels) {
    if (label < 0) throw std::invalid_argument("row labels must be >= 0");
    num_classes = std::max(num_classes, label + 1);
  }
  std::vector<std::vector<GroupPartition::Cell>> groups;
  for (Index j = 0; j < cols; ++j) {
    for (int c = 0; c < num_classes; ++c) {
      std::vector<GroupPartition::Cell> cells;
      for (std::size_t i = 0; i < row_labels.size(); ++i) {
        if (row_labels[i] == c) {
          cells.emplace_back(static_cast<std::int32_t>(i),
                             static_cast<std::int32_t>(j));
        }
      }
      if (!cells.empty()) groups.push_back(std::move(cells));
    }
  }
  return make_partition(static_cast<Index>(row_labels.size()), cols, groups);
}

}  // namespace otdr
