#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codesign/clustering.hpp"
#include "codesign/evaluation.hpp"
#include "codesign/mpc.hpp"
#include "codesign/nsga2.hpp"
#include "codesign/robot_model.hpp"
#include "codesign/trajectory.hpp"

namespace codesign {

struct DesignSpaceConfig {
  RangeSet ranges = default_ranges();
  int n_models = 5000;
  FeasibilityConfig feasibility;
};

struct ClusteringConfig {
  int k = 100;
  KmeansSettings kmeans;
};

struct TrajectoryConfig {
  double dt = 0.1;
  double cruise_speed = 1.0;  // [m/s]
  std::vector<Waypoint> waypoints;
};

struct GaSection {
  int population = 40;
  int generations = 60;
  double crossover_prob = 0.90;
  double mutation_prob = 0.11;
  double sbx_eta = 15.0;
  double pm_eta = 20.0;
  std::array<std::pair<double, double>, 8> weight_bounds = GaConfig::default_weight_bounds();
};

struct RunConfig {
  std::uint64_t seed = 42;
  DesignSpaceConfig design;
  BaseRobotSpec base;
  ClusteringConfig clustering;
  TrajectoryConfig trajectory;
  MpcConfig mpc;
  ControlWeights default_weights;
  double penalty = 1e6;
  GaSection ga;

  GaConfig ga_config() const;  // with seed and k resolved
  EvaluationConfig evaluation_config() const;
};

RunConfig default_run_config();

RunConfig load_run_config(const std::string& path);
void save_run_config(const RunConfig& config, const std::string& path);

/// FNV-1a over the canonical JSON dump; embedded in every artifact so
/// cmd_optimize can refuse mismatched inputs.
std::string config_hash(const RunConfig& config);

}  // namespace codesign
