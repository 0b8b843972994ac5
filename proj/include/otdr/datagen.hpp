#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "otdr/groups.hpp"
#include "otdr/problem.hpp"
#include "otdr/types.hpp"

namespace otdr {

// Row-per-point cloud; labels empty when the cloud is unlabeled.
struct PointCloud {
  Matrix points;            // N x d
  std::vector<int> labels;  // size N or empty

  Index size() const { return points.rows(); }
  Index dim() const { return points.cols(); }
  bool labeled() const { return !labels.empty(); }
};

// C_ij = 0.5 ||a_i - b_j||^2.
Matrix squared_distance_cost(const PointCloud& a, const PointCloud& b);

struct GaussianProblem {
  Problem problem;  // cost normalized to max 1, uniform marginals
  PointCloud source, target;
};

// Two seeded 2-D Gaussian clouds with random means/covariance factors.
GaussianProblem gaussian_problem(Index m, Index n, std::uint64_t seed);

struct AdaptationProblem {
  Problem problem;
  GroupPartition groups;  // per-(target column, source class) row blocks
  PointCloud source, target;
};

// Labeled source blobs on a circle (radius 3, spread 0.85: separated, with
// tails), target drawn fresh from the same class blobs and pushed through a
// seeded random affine map whose rotation sits just below the two-class
// ambiguity angle, so plain transport leaks a little mass across classes;
// identity_map skips the transform. Class sizes differ by at most one when
// the point count does not divide evenly.
AdaptationProblem adaptation_problem(Index m, Index n, int classes,
                                     std::uint64_t seed,
                                     bool identity_map = false);

struct BarycentricResult {
  PointCloud cloud;
  std::vector<Index> unmapped;  // rows with p_i = 0
};

// adapted_i = (1/p_i) sum_j X_ij t_j. Rows with p_i = 0 are marked unmapped
// and keep the source coordinates when a source cloud is supplied (NaN
// otherwise). Labels are inherited from the source cloud when present.
BarycentricResult barycentric_map(const Matrix& plan, const Vector& p,
                                  const PointCloud& target,
                                  const PointCloud* source = nullptr);

// Per class: unregularized OT between the adapted and target subclouds under
// the 0.5||.||^2 cost, summed over classes. Both clouds must be labeled;
// a class present on one side but empty on the other raises EmptyClass.
// Unmapped adapted points (NaN coordinates) are excluded.
double class_w2_score(const PointCloud& adapted, const PointCloud& target);

}  // namespace otdr
