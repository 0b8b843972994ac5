#pragma once

#include <Eigen/Dense>

namespace otdr {

// Plans and costs are stored dense row-major: the solver touches every entry
// every iteration, and the binary file format is row-major anyway.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// A transport plan is just an m-by-n matrix, entrywise >= 0, with row sums p
// and column sums q at feasibility.
using TransportPlan = Matrix;

}  // namespace otdr
