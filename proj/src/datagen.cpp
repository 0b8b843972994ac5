#include "otdr/datagen.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "otdr/errors.hpp"
#include "otdr/regularizers.hpp"
#include "otdr/rng.hpp"
#include "otdr/solver.hpp"

namespace otdr {

namespace {

constexpr double kPi = 3.14159265358979323846;

// mean + L z for a seeded 2x2 factor L; keeps clouds anisotropic but tame.
PointCloud sample_gaussian_cloud(Rng& rng, Index count) {
  double mean_x = 2.0 * rng.normal();
  double mean_y = 2.0 * rng.normal();
  double l00 = 0.6 + 0.4 * rng.uniform01();
  double l10 = 0.4 * rng.normal();
  double l11 = 0.6 + 0.4 * rng.uniform01();
  PointCloud cloud;
  cloud.points.resize(count, 2);
  for (Index i = 0; i < count; ++i) {
    double z0 = rng.normal(), z1 = rng.normal();
    cloud.points(i, 0) = mean_x + l00 * z0;
    cloud.points(i, 1) = mean_y + l10 * z0 + l11 * z1;
  }
  return cloud;
}

Vector uniform_marginal(Index n) {
  return Vector::Constant(n, 1.0 / static_cast<double>(n));
}

}  // namespace

Matrix squared_distance_cost(const PointCloud& a, const PointCloud& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("point clouds have different dimensions");
  }
  Matrix cost(a.size(), b.size());
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = 0; j < b.size(); ++j) {
      cost(i, j) = 0.5 * (a.points.row(i) - b.points.row(j)).squaredNorm();
    }
  }
  return cost;
}

GaussianProblem gaussian_problem(Index m, Index n, std::uint64_t seed) {
  Rng rng(seed);
  GaussianProblem out;
  out.source = sample_gaussian_cloud(rng, m);
  out.target = sample_gaussian_cloud(rng, n);
  Problem pr = validate_problem(squared_distance_cost(out.source, out.target),
                                uniform_marginal(m), uniform_marginal(n));
  out.problem = normalize_cost(std::move(pr));
  return out;
}

AdaptationProblem adaptation_problem(Index m, Index n, int classes,
                                     std::uint64_t seed, bool identity_map) {
  if (classes < 1) throw std::invalid_argument("classes must be >= 1");
  if (m < classes || n < classes) {
    throw std::invalid_argument("need at least one point per class per side");
  }
  Rng rng(seed);

  // Class blobs on a circle, separated but with visible tails relative to
  // their spread, so the transformed instances develop a contested boundary.
  std::vector<std::pair<double, double>> means(classes);
  for (int c = 0; c < classes; ++c) {
    double angle = 2.0 * kPi * c / classes;
    means[c] = {3.0 * std::cos(angle), 3.0 * std::sin(angle)};
  }
  constexpr double kSpread = 0.85;

  auto sample_labeled = [&](Index count) {
    PointCloud cloud;
    cloud.points.resize(count, 2);
    cloud.labels.resize(count);
    // Sizes as equal as possible; the first (count % classes) classes get
    // one extra point.
    Index at = 0;
    for (int c = 0; c < classes; ++c) {
      Index share = count / classes + (c < count % classes ? 1 : 0);
      for (Index t = 0; t < share; ++t, ++at) {
        cloud.points(at, 0) = means[c].first + kSpread * rng.normal();
        cloud.points(at, 1) = means[c].second + kSpread * rng.normal();
        cloud.labels[at] = c;
      }
    }
    return cloud;
  };

  AdaptationProblem out;
  out.source = sample_labeled(m);
  out.target = sample_labeled(n);

  if (!identity_map) {
    // Rotation drawn from a narrow band just below the angle at which the
    // two-class geometry becomes ambiguous, plus slight scale/translation
    // jitter. Plain transport then leaks a little boundary mass across
    // classes on every draw (the regime group-lasso repairs), without any
    // draw flipping whole blobs.
    double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    double angle = sign * (44.0 + 4.0 * rng.uniform01()) * kPi / 180.0;
    double scale = 0.98 + 0.04 * rng.uniform01();
    double tx = 0.2 * rng.normal(), ty = 0.2 * rng.normal();
    double ca = scale * std::cos(angle), sa = scale * std::sin(angle);
    for (Index j = 0; j < n; ++j) {
      double x = out.target.points(j, 0), y = out.target.points(j, 1);
      out.target.points(j, 0) = ca * x - sa * y + tx;
      out.target.points(j, 1) = sa * x + ca * y + ty;
    }
  }

  Problem pr = validate_problem(squared_distance_cost(out.source, out.target),
                                uniform_marginal(m), uniform_marginal(n));
  out.problem = normalize_cost(std::move(pr));
  out.groups = column_class_blocks(out.source.labels, n);
  return out;
}

BarycentricResult barycentric_map(const Matrix& plan, const Vector& p,
                                  const PointCloud& target,
                                  const PointCloud* source) {
  if (plan.rows() != p.size() || plan.cols() != target.size()) {
    throw DimensionMismatch("plan does not match marginal/target sizes");
  }
  if (source && source->size() != plan.rows()) {
    throw DimensionMismatch("source cloud does not match plan rows");
  }
  BarycentricResult out;
  out.cloud.points.setConstant(plan.rows(), target.dim(),
                               std::numeric_limits<double>::quiet_NaN());
  for (Index i = 0; i < plan.rows(); ++i) {
    if (p[i] > 0.0) {
      out.cloud.points.row(i) = (plan.row(i) * target.points) / p[i];
    } else {
      out.unmapped.push_back(i);
      if (source) out.cloud.points.row(i) = source->points.row(i);
    }
  }
  if (source && source->labeled()) out.cloud.labels = source->labels;
  return out;
}

double class_w2_score(const PointCloud& adapted, const PointCloud& target) {
  if (!adapted.labeled() || !target.labeled()) {
    throw std::invalid_argument("class_w2_score needs labels on both clouds");
  }
  std::set<int> class_ids(adapted.labels.begin(), adapted.labels.end());
  class_ids.insert(target.labels.begin(), target.labels.end());

  double total = 0.0;
  for (int c : class_ids) {
    std::vector<Index> ai, ti;
    for (Index i = 0; i < adapted.size(); ++i) {
      // Unmapped rows carry NaN coordinates; leave them out.
      if (adapted.labels[i] == c && adapted.points.row(i).allFinite()) {
        ai.push_back(i);
      }
    }
    for (Index j = 0; j < target.size(); ++j) {
      if (target.labels[j] == c) ti.push_back(j);
    }
    if (ai.empty() || ti.empty()) {
      throw EmptyClass("class " + std::to_string(c) +
                       " is empty on one side");
    }
    PointCloud sub_a, sub_t;
    sub_a.points.resize(static_cast<Index>(ai.size()), adapted.dim());
    sub_t.points.resize(static_cast<Index>(ti.size()), target.dim());
    for (std::size_t i = 0; i < ai.size(); ++i) {
      sub_a.points.row(static_cast<Index>(i)) = adapted.points.row(ai[i]);
    }
    for (std::size_t j = 0; j < ti.size(); ++j) {
      sub_t.points.row(static_cast<Index>(j)) = target.points.row(ti[j]);
    }

    Matrix cost = squared_distance_cost(sub_a, sub_t);
    double mx = cost.maxCoeff();
    if (!(mx > 0.0)) continue;  // identical clouds: zero transport cost
    Problem sub = validate_problem(
        cost / mx, uniform_marginal(sub_a.size()), uniform_marginal(sub_t.size()));
    SolverOptions opt;
    opt.tol_primal = 1e-6;
    opt.max_iter = 2000000;
    SolveReport report = solve(sub, ZeroReg{}, opt);
    total += report.objective * mx;  // undo the cost normalization
  }
  return total;
}

}  // namespace otdr
