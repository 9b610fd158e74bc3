#include "codesign/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include <json.hpp>

#include "codesign/rng.hpp"

namespace codesign {

Eigen::VectorXd normalize(const GeometricParams& params, const RangeSet& ranges) {
  Eigen::VectorXd v(kNumGeometricParams);
  for (int i = 0; i < kNumGeometricParams; ++i) {
    const ParameterRange& r = ranges[i];
    v[i] = r.max > r.min ? (params[i] - r.min) / (r.max - r.min) : 0.0;
  }
  return v;
}

namespace {

int count_distinct(const std::vector<Eigen::VectorXd>& points) {
  std::set<std::vector<double>> distinct;
  for (const Eigen::VectorXd& p : points) {
    distinct.insert(std::vector<double>(p.data(), p.data() + p.size()));
  }
  return static_cast<int>(distinct.size());
}

std::vector<Eigen::VectorXd> kmeanspp_init(const std::vector<Eigen::VectorXd>& points, int k, Rng& rng) {
  const int n = static_cast<int>(points.size());
  std::vector<Eigen::VectorXd> centers;
  centers.reserve(k);
  centers.push_back(points[rng.uniform_index(n)]);

  std::vector<double> dist2(n);
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const Eigen::VectorXd& c : centers) best = std::min(best, (points[i] - c).squaredNorm());
      dist2[i] = best;
      total += best;
    }
    int chosen;
    if (total <= 0.0) {
      chosen = rng.uniform_index(n);  // all points coincide with some center
    } else {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      chosen = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += dist2[i];
        if (acc >= target) {
          chosen = i;
          break;
        }
      }
    }
    centers.push_back(points[chosen]);
  }
  return centers;
}

struct LloydResult {
  std::vector<Eigen::VectorXd> means;
  std::vector<int> assignments;
  double inertia = 0.0;
  std::vector<double> history;
};

LloydResult lloyd(const std::vector<Eigen::VectorXd>& points, std::vector<Eigen::VectorXd> means,
                  int max_iter, double tol) {
  const int n = static_cast<int>(points.size());
  const int k = static_cast<int>(means.size());
  const int dim = static_cast<int>(points.front().size());
  LloydResult res;
  res.assignments.assign(n, 0);

  for (int iter = 0; iter < max_iter; ++iter) {
    double inertia = 0.0;
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int arg = 0;
      for (int c = 0; c < k; ++c) {
        const double d = (points[i] - means[c]).squaredNorm();
        if (d < best) {
          best = d;
          arg = c;
        }
      }
      res.assignments[i] = arg;
      inertia += best;
      ++counts[arg];
    }

    // Empty-cluster repair: hand over the farthest point of the largest cluster.
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      const int largest =
          static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
      int farthest = -1;
      double worst = -1.0;
      for (int i = 0; i < n; ++i) {
        if (res.assignments[i] != largest) continue;
        const double d = (points[i] - means[largest]).squaredNorm();
        if (d > worst) {
          worst = d;
          farthest = i;
        }
      }
      if (farthest >= 0) {
        means[c] = points[farthest];  // re-seed the empty cluster on that point
        inertia -= worst;
        res.assignments[farthest] = c;
        --counts[largest];
        ++counts[c];
      }
    }

    res.history.push_back(inertia);
    res.inertia = inertia;

    std::vector<Eigen::VectorXd> next(k, Eigen::VectorXd::Zero(dim));
    for (int i = 0; i < n; ++i) next[res.assignments[i]] += points[i];
    double shift = 0.0;
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) next[c] /= counts[c];
      else next[c] = means[c];
      shift += (next[c] - means[c]).norm();
    }
    means = std::move(next);
    if (shift / k < tol) break;
  }

  // Final inertia against the converged means.
  double inertia = 0.0;
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int c = 0; c < k; ++c) {
      const double d = (points[i] - means[c]).squaredNorm();
      if (d < best) {
        best = d;
        arg = c;
      }
    }
    res.assignments[i] = arg;
    inertia += best;
  }
  res.history.push_back(inertia);
  res.inertia = inertia;
  res.means = std::move(means);
  return res;
}

}  // namespace

ClusterSet kmeans(const std::vector<Eigen::VectorXd>& points, int k, std::uint64_t seed,
                  const KmeansSettings& settings) {
  if (points.empty()) throw KTooLarge("no points to cluster");
  if (k < 1) throw KTooLarge("k must be >= 1");
  if (k > count_distinct(points)) {
    throw KTooLarge("k = " + std::to_string(k) + " exceeds " +
                    std::to_string(count_distinct(points)) + " distinct points");
  }

  LloydResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < settings.restarts; ++restart) {
    Rng rng(derive_seed(seed, "kmeans", restart));
    LloydResult res = lloyd(points, kmeanspp_init(points, k, rng), settings.max_iter, settings.tol);
    if (res.inertia < best.inertia) best = std::move(res);
  }

  ClusterSet out;
  out.k = k;
  out.assignments = std::move(best.assignments);
  out.means = std::move(best.means);
  out.inertia = best.inertia;
  out.inertia_history = std::move(best.history);
  return out;
}

std::vector<int> snap_centroids(const std::vector<Eigen::VectorXd>& means,
                                const ModelRegistry& registry, const RangeSet& ranges) {
  std::vector<int> ids;
  ids.reserve(means.size());
  for (const Eigen::VectorXd& mean : means) {
    int best_id = 0;
    double best = std::numeric_limits<double>::infinity();
    for (const RobotModel& m : registry.models()) {
      const double d = (normalize(m.params, ranges) - mean).squaredNorm();
      if (d < best) {
        best = d;
        best_id = m.model_id;
      }
    }
    ids.push_back(best_id);
  }
  return ids;
}

Eigen::MatrixXd cluster_spread(const ClusterSet& clusters, const ModelRegistry& registry) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(clusters.k, kNumGeometricParams);
  Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(clusters.k, kNumGeometricParams);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(clusters.k);
  for (int i = 0; i < registry.size(); ++i) {
    const int c = clusters.assignments[i];
    counts[c] += 1.0;
    for (int d = 0; d < kNumGeometricParams; ++d) {
      const double v = registry.get(i).params[d];
      sums(c, d) += v;
      sq(c, d) += v * v;
    }
  }
  Eigen::MatrixXd spread = Eigen::MatrixXd::Zero(clusters.k, kNumGeometricParams);
  for (int c = 0; c < clusters.k; ++c) {
    if (counts[c] == 0.0) continue;
    for (int d = 0; d < kNumGeometricParams; ++d) {
      const double mean = sums(c, d) / counts[c];
      const double var = std::max(0.0, sq(c, d) / counts[c] - mean * mean);
      spread(c, d) = std::sqrt(var);
    }
  }
  return spread;
}

void clusters_save(const ClusterFile& file, const std::string& path) {
  nlohmann::json j;
  j["type"] = "cluster_set";
  j["version"] = 1;
  j["seed"] = file.seed;
  j["config_hash"] = file.config_hash;
  j["k"] = file.clusters.k;
  j["inertia"] = file.clusters.inertia;
  j["centroid_model_ids"] = file.clusters.centroid_model_ids;
  j["assignments"] = file.clusters.assignments;
  nlohmann::json means = nlohmann::json::array();
  for (const Eigen::VectorXd& m : file.clusters.means) {
    means.push_back(std::vector<double>(m.data(), m.data() + m.size()));
  }
  j["means"] = means;
  nlohmann::json spread = nlohmann::json::array();
  for (int c = 0; c < file.clusters.spread.rows(); ++c) {
    std::vector<double> row(file.clusters.spread.cols());
    for (int d = 0; d < file.clusters.spread.cols(); ++d) row[d] = file.clusters.spread(c, d);
    spread.push_back(row);
  }
  j["spread"] = spread;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
}

ClusterFile clusters_load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedFile(path, 1, e.what());
  }
  ClusterFile file;
  try {
    if (j.value("type", "") != "cluster_set") throw MalformedFile(path, 1, "not a cluster_set file");
    file.seed = j.at("seed").get<std::uint64_t>();
    file.config_hash = j.value("config_hash", "");
    file.clusters.k = j.at("k").get<int>();
    file.clusters.inertia = j.at("inertia").get<double>();
    file.clusters.centroid_model_ids = j.at("centroid_model_ids").get<std::vector<int>>();
    file.clusters.assignments = j.at("assignments").get<std::vector<int>>();
    for (const auto& m : j.at("means")) {
      const std::vector<double> row = m.get<std::vector<double>>();
      file.clusters.means.push_back(Eigen::Map<const Eigen::VectorXd>(row.data(), row.size()));
    }
    const auto& spread = j.at("spread");
    file.clusters.spread.resize(spread.size(), kNumGeometricParams);
    for (std::size_t c = 0; c < spread.size(); ++c) {
      for (int d = 0; d < kNumGeometricParams; ++d) file.clusters.spread(c, d) = spread.at(c).at(d);
    }
  } catch (const nlohmann::json::exception& e) {
    throw MalformedFile(path, 1, e.what());
  }
  return file;
}

}  // namespace codesign
