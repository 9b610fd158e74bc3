#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "codesign/registry.hpp"

namespace codesign {

struct ClusterSet {
  int k = 0;
  std::vector<int> assignments;          // point index -> cluster
  std::vector<Eigen::VectorXd> means;    // k vectors in [0,1]^d
  std::vector<int> centroid_model_ids;   // snapped representatives
  double inertia = 0.0;                  // sum of squared distances to means
  std::vector<double> inertia_history;   // per Lloyd iteration of the winning restart
  Eigen::MatrixXd spread;                // k x 8 per-parameter population std, physical units
};

/// Affine map onto [0,1]^8; degenerate (min = max) coordinates map to 0.
Eigen::VectorXd normalize(const GeometricParams& params, const RangeSet& ranges);

struct KmeansSettings {
  int max_iter = 300;
  double tol = 1e-8;
  int restarts = 10;
};

/// Lloyd iterations from k-means++ seeding, best of `restarts` by inertia
/// (ties to the lowest restart index). Throws KTooLarge if k exceeds the
/// number of distinct points.
ClusterSet kmeans(const std::vector<Eigen::VectorXd>& points, int k, std::uint64_t seed,
                  const KmeansSettings& settings = {});

/// Nearest registry model (normalized L2) per mean; ties to the lowest id.
std::vector<int> snap_centroids(const std::vector<Eigen::VectorXd>& means,
                                const ModelRegistry& registry, const RangeSet& ranges);

/// Per-cluster population standard deviation of each raw parameter.
Eigen::MatrixXd cluster_spread(const ClusterSet& clusters, const ModelRegistry& registry);

struct ClusterFile {
  ClusterSet clusters;
  std::uint64_t seed = 0;
  std::string config_hash;
};

void clusters_save(const ClusterFile& file, const std::string& path);
ClusterFile clusters_load(const std::string& path);

}  // namespace codesign
