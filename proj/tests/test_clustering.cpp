#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "codesign/clustering.hpp"
#include "codesign/rng.hpp"

using namespace codesign;

namespace {

std::vector<Eigen::VectorXd> points_1d(std::initializer_list<double> values) {
  std::vector<Eigen::VectorXd> out;
  for (double v : values) {
    Eigen::VectorXd p(1);
    p[0] = v;
    out.push_back(p);
  }
  return out;
}

// Exhaustive optimal partition inertia: every assignment of n points to k
// clusters, group means as centroids.
double brute_force_inertia(const std::vector<Eigen::VectorXd>& points, int k) {
  const int n = static_cast<int>(points.size());
  const int dim = static_cast<int>(points.front().size());
  long total = 1;
  for (int i = 0; i < n; ++i) total *= k;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> assign(n);
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int i = 0; i < n; ++i) {
      assign[i] = static_cast<int>(c % k);
      c /= k;
    }
    std::vector<Eigen::VectorXd> sums(k, Eigen::VectorXd::Zero(dim));
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums[assign[i]] += points[i];
      ++counts[assign[i]];
    }
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd mean = sums[assign[i]] / counts[assign[i]];
      inertia += (points[i] - mean).squaredNorm();
    }
    best = std::min(best, inertia);
  }
  return best;
}

ModelRegistry make_registry(const std::vector<GeometricParams>& params_list) {
  std::vector<RobotModel> models;
  for (std::size_t i = 0; i < params_list.size(); ++i) {
    RobotModel m;
    m.model_id = static_cast<int>(i);
    m.params = params_list[i];
    m.mass = 1.0;
    models.push_back(m);
  }
  return ModelRegistry(std::move(models), RegistryProvenance{});
}

GeometricParams uniform_params(const RangeSet& ranges, double fraction) {
  GeometricParams p;
  for (int d = 0; d < kNumGeometricParams; ++d) {
    p[d] = ranges[d].min + fraction * (ranges[d].max - ranges[d].min);
  }
  return p;
}

}  // namespace

TEST_CASE("normalize maps the range box onto the unit cube") {
  const RangeSet ranges = default_ranges();
  GeometricParams lo, hi, mid;
  for (int d = 0; d < kNumGeometricParams; ++d) {
    lo[d] = ranges[d].min;
    hi[d] = ranges[d].max;
  }
  CHECK(normalize(lo, ranges).norm() == 0.0);
  CHECK((normalize(hi, ranges) - Eigen::VectorXd::Ones(8)).norm() == doctest::Approx(0.0));

  mid = lo;
  mid.jet_angle = 7.0;
  CHECK(normalize(mid, ranges)[0] == doctest::Approx(0.5));

  RangeSet degenerate = ranges;
  degenerate[3] = {"forearm_len", 5.0, 5.0, 1.0};
  GeometricParams p = lo;
  p.forearm_len = 5.0;
  CHECK(normalize(p, degenerate)[3] == 0.0);
}

TEST_CASE("k = 1 returns the coordinate-wise mean") {
  Rng rng(2);
  std::vector<Eigen::VectorXd> points;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd p(4);
    for (int d = 0; d < 4; ++d) p[d] = rng.uniform();
    mean += p;
    points.push_back(p);
  }
  mean /= 20.0;
  const ClusterSet set = kmeans(points, 1, 77);
  CHECK((set.means[0] - mean).norm() < 1e-12);
  for (int a : set.assignments) CHECK(a == 0);
}

TEST_CASE("k = n gives singleton clusters and zero inertia") {
  Rng rng(4);
  std::vector<Eigen::VectorXd> points;
  for (int i = 0; i < 6; ++i) {
    Eigen::VectorXd p(3);
    for (int d = 0; d < 3; ++d) p[d] = rng.uniform();
    points.push_back(p);
  }
  const ClusterSet set = kmeans(points, 6, 9);
  CHECK(set.inertia == doctest::Approx(0.0));
  std::set<int> used(set.assignments.begin(), set.assignments.end());
  CHECK(used.size() == 6);
}

TEST_CASE("two natural groups in one dimension split correctly") {
  const auto points = points_1d({0.0, 0.1, 0.9, 1.0});
  const ClusterSet set = kmeans(points, 2, 1);
  CHECK(set.assignments[0] == set.assignments[1]);
  CHECK(set.assignments[2] == set.assignments[3]);
  CHECK(set.assignments[0] != set.assignments[2]);
  CHECK(set.inertia == doctest::Approx(2 * 0.05 * 0.05 * 2).epsilon(1e-9));
}

TEST_CASE("k exceeding distinct points is rejected") {
  const auto points = points_1d({0.5, 0.5, 0.5});
  CHECK_THROWS_AS(kmeans(points, 2, 1), KTooLarge);
  CHECK_NOTHROW(kmeans(points, 1, 1));
}

TEST_CASE("lloyd inertia history is non-increasing and near brute-force optimal") {
  Rng rng(31);
  for (int instance = 0; instance < 40; ++instance) {
    const int n = 4 + rng.uniform_index(5);  // 4..8
    const int k = 2 + rng.uniform_index(2);  // 2..3
    std::vector<Eigen::VectorXd> points;
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd p(2);
      p[0] = rng.uniform();
      p[1] = rng.uniform();
      points.push_back(p);
    }
    const ClusterSet set = kmeans(points, k, 1000 + instance);
    for (std::size_t i = 1; i < set.inertia_history.size(); ++i) {
      CHECK(set.inertia_history[i] <= set.inertia_history[i - 1] + 1e-12);
    }
    const double optimal = brute_force_inertia(points, k);
    CHECK(set.inertia <= 1.05 * optimal + 1e-12);

    // At convergence every point sits with its nearest mean.
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) best = std::min(best, (points[i] - set.means[c]).squaredNorm());
      CHECK((points[i] - set.means[set.assignments[i]]).squaredNorm() ==
            doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("kmeans is deterministic for a fixed seed") {
  Rng rng(8);
  std::vector<Eigen::VectorXd> points;
  for (int i = 0; i < 40; ++i) {
    Eigen::VectorXd p(8);
    for (int d = 0; d < 8; ++d) p[d] = rng.uniform();
    points.push_back(p);
  }
  const ClusterSet a = kmeans(points, 5, 123);
  const ClusterSet b = kmeans(points, 5, 123);
  CHECK(a.assignments == b.assignments);
  CHECK(a.inertia == b.inertia);
  for (int c = 0; c < 5; ++c) CHECK(a.means[c] == b.means[c]);
}

TEST_CASE("snap_centroids picks the nearest model, ties to the lowest id") {
  const RangeSet ranges = default_ranges();
  std::vector<GeometricParams> params_list;
  for (int i = 0; i < 13; ++i) {
    // Distinct models clear of the 0.4..0.6 band used by the tie pair below.
    params_list.push_back(uniform_params(ranges, i < 7 ? 0.03 * i : 0.70 + 0.03 * (i - 7)));
  }
  params_list[7] = uniform_params(ranges, 0.4);
  params_list[12] = uniform_params(ranges, 0.6);
  const ModelRegistry registry = make_registry(params_list);

  // Exact hit.
  std::vector<Eigen::VectorXd> means{normalize(params_list[3], ranges)};
  CHECK(snap_centroids(means, registry, ranges)[0] == 3);

  // Equidistant pair {7, 12} around the query point.
  means[0] = Eigen::VectorXd::Constant(8, 0.5);
  CHECK(snap_centroids(means, registry, ranges)[0] == 7);

  // Brute-force nearest for a generic mean.
  Eigen::VectorXd query(8);
  Rng rng(5);
  for (int d = 0; d < 8; ++d) query[d] = rng.uniform();
  means[0] = query;
  int expected = 0;
  double best = std::numeric_limits<double>::infinity();
  for (const RobotModel& m : registry.models()) {
    const double d = (normalize(m.params, ranges) - query).squaredNorm();
    if (d < best) {
      best = d;
      expected = m.model_id;
    }
  }
  CHECK(snap_centroids(means, registry, ranges)[0] == expected);
}

TEST_CASE("cluster spread is the population standard deviation in physical units") {
  const RangeSet ranges = default_ranges();
  std::vector<GeometricParams> params_list(3);
  params_list[0].foot_length = 0.0;
  params_list[1].foot_length = 100.0;
  params_list[2].foot_length = 40.0;
  const ModelRegistry registry = make_registry(params_list);

  ClusterSet set;
  set.k = 2;
  set.assignments = {0, 0, 1};  // {0, 100} together, singleton {40}
  const Eigen::MatrixXd spread = cluster_spread(set, registry);
  CHECK(spread(0, 7) == doctest::Approx(50.0));
  CHECK(spread(1, 7) == doctest::Approx(0.0));
  for (int d = 0; d < 7; ++d) {
    CHECK(spread(0, d) == doctest::Approx(0.0));  // identical values, no variance
  }
}
