#include <stdexcept>

#include "doctest.h"
#include "otdr/groups.hpp"

using namespace otdr;
using Cell = GroupPartition::Cell;

TEST_SUITE("groups") {

TEST_CASE("make_partition stores groups back to back") {
  GroupPartition part = make_partition(2, 3, {{{0, 0}, {1, 0}}, {{0, 2}}});
  CHECK(part.num_groups() == 2);
  CHECK(part.rows == 2);
  CHECK(part.cols == 3);
  REQUIRE(part.group(0).size() == 2);
  CHECK(part.group(0)[0] == Cell{0, 0});
  CHECK(part.group(0)[1] == Cell{1, 0});
  REQUIRE(part.group(1).size() == 1);
  CHECK(part.group(1)[0] == Cell{0, 2});
}

TEST_CASE("out-of-grid cells are rejected") {
  CHECK_THROWS_AS(make_partition(2, 2, {{{2, 0}}}), std::invalid_argument);
  CHECK_THROWS_AS(make_partition(2, 2, {{{0, 2}}}), std::invalid_argument);
  CHECK_THROWS_AS(make_partition(2, 2, {{{-1, 0}}}), std::invalid_argument);
}

TEST_CASE("overlapping groups are rejected") {
  CHECK_THROWS_AS(make_partition(2, 2, {{{0, 0}, {0, 1}}, {{0, 1}}}),
                  std::invalid_argument);
  // duplicate inside one group is an overlap too
  CHECK_THROWS_AS(make_partition(2, 2, {{{0, 0}, {0, 0}}}),
                  std::invalid_argument);
}

TEST_CASE("uncovered cells are legal") {
  GroupPartition part = make_partition(3, 3, {{{1, 1}}});
  CHECK(part.num_groups() == 1);
}

TEST_CASE("single class gives one full column per target point") {
  GroupPartition part = column_class_blocks({0, 0, 0, 0}, 3);
  REQUIRE(part.num_groups() == 3);
  for (std::size_t g = 0; g < 3; ++g) {
    REQUIRE(part.group(g).size() == 4);
    for (int i = 0; i < 4; ++i) {
      CHECK(part.group(g)[static_cast<std::size_t>(i)] ==
            Cell{i, static_cast<int>(g)});
    }
  }
}

TEST_CASE("two classes, four rows, three columns gives six 2x1 blocks") {
  GroupPartition part = column_class_blocks({0, 1, 0, 1}, 3);
  REQUIRE(part.num_groups() == 6);
  for (std::size_t g = 0; g < 6; ++g) CHECK(part.group(g).size() == 2);
  // column-major order: groups of column j come before those of column j+1
  CHECK(part.group(0)[0] == Cell{0, 0});  // column 0, class 0 rows {0,2}
  CHECK(part.group(0)[1] == Cell{2, 0});
  CHECK(part.group(1)[0] == Cell{1, 0});  // column 0, class 1 rows {1,3}
  CHECK(part.group(2)[0] == Cell{0, 1});  // column 1 starts
}

TEST_CASE("classes partition the whole grid") {
  GroupPartition part = column_class_blocks({1, 0, 2, 1, 0}, 4);
  std::size_t covered = 0;
  for (std::size_t g = 0; g < part.num_groups(); ++g) {
    covered += part.group(g).size();
  }
  CHECK(covered == 20);
}

TEST_CASE("absent class ids produce no empty groups") {
  GroupPartition part = column_class_blocks({0, 0, 3, 3}, 2);
  CHECK(part.num_groups() == 4);  // 2 present classes x 2 columns
  for (std::size_t g = 0; g < part.num_groups(); ++g) {
    CHECK(part.group(g).size() == 2);
  }
}

TEST_CASE("negative labels are rejected") {
  CHECK_THROWS_AS(column_class_blocks({0, -1}, 2), std::invalid_argument);
  CHECK_THROWS_AS(column_class_blocks({}, 2), std::invalid_argument);
  CHECK_THROWS_AS(column_class_blocks({0, 1}, 0), std::invalid_argument);
}

}  // TEST_SUITE
