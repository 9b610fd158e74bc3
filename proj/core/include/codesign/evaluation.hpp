#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "codesign/clustering.hpp"
#include "codesign/mpc.hpp"
#include "codesign/registry.hpp"
#include "codesign/trajectory.hpp"

namespace codesign {

struct Objectives {
  double mse_total = 0.0;  // [m^2]
  double energy = 0.0;     // [J]
  bool feasible = false;
  FailureReason failure_reason = FailureReason::None;
};

/// Per-axis mean squared CoM error, then the Euclidean norm of that 3-vector.
double tracking_mse(const std::vector<Eigen::Vector3d>& positions,
                    const std::vector<Eigen::Vector3d>& references);
double tracking_mse(const SimResult& result, const ReferenceTrajectory& trajectory);

/// Signed instantaneous mechanical power of the thrust wrench.
double mechanical_power(const Eigen::Vector3d& force, const Eigen::Vector3d& torque,
                        const Eigen::Vector3d& v_base, const Eigen::Vector3d& omega_base);

/// E = sum |P| dt; braking effort counts positively.
double energy(const std::vector<double>& power_samples, double dt);

/// Power samples along a simulation, from the total wrench and the state
/// velocities. The per-thruster route is exposed for the bookkeeping check.
std::vector<double> power_trace(const SimResult& result, const RobotModel& model);
std::vector<double> power_trace_per_thruster(const SimResult& result, const RobotModel& model);

struct EvaluationConfig {
  double penalty = 1e6;
  MpcConfig mpc;
};

struct Candidate {
  int centroid_index = 0;
  ControlWeights weights;
};

Objectives evaluate_candidate(const Candidate& candidate, const ClusterSet& clusters,
                              const ModelRegistry& registry, const ReferenceTrajectory& trajectory,
                              const EvaluationConfig& config);

/// One ledger record per evaluated candidate (JSON-lines, append-only).
struct EvalRecord {
  std::int64_t candidate_id = 0;
  int generation = 0;
  int centroid_index = 0;
  int model_id = -1;
  std::array<double, 8> weights{};  // physical (not log-space) weights
  Objectives objectives;
};

std::string eval_record_to_json(const EvalRecord& record);
EvalRecord eval_record_from_json(const std::string& line, const std::string& path, int line_no);

}  // namespace codesign
