#include "codesign/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace codesign {

double tracking_mse(const std::vector<Eigen::Vector3d>& positions,
                    const std::vector<Eigen::Vector3d>& references) {
  if (positions.size() != references.size()) {
    throw LengthMismatch("position log and reference lengths differ");
  }
  if (positions.empty()) throw LengthMismatch("empty logs");
  Eigen::Vector3d per_axis = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    per_axis += (positions[i] - references[i]).cwiseAbs2();
  }
  per_axis /= static_cast<double>(positions.size());
  return per_axis.norm();
}

double tracking_mse(const SimResult& result, const ReferenceTrajectory& trajectory) {
  std::vector<Eigen::Vector3d> positions, references;
  positions.reserve(result.states.size());
  references.reserve(result.states.size());
  for (std::size_t i = 0; i < result.states.size(); ++i) {
    positions.push_back(result.states[i].x_com);
    references.push_back(trajectory.at(result.times[i]).x_ref);
  }
  return tracking_mse(positions, references);
}

double mechanical_power(const Eigen::Vector3d& force, const Eigen::Vector3d& torque,
                        const Eigen::Vector3d& v_base, const Eigen::Vector3d& omega_base) {
  return force.dot(v_base) + torque.dot(omega_base);
}

double energy(const std::vector<double>& power_samples, double dt) {
  if (!(dt > 0.0)) throw DegenerateDuration("dt must be positive");
  double total = 0.0;
  for (double p : power_samples) total += std::abs(p);
  return total * dt;
}

std::vector<double> power_trace(const SimResult& result, const RobotModel& model) {
  std::vector<double> trace;
  trace.reserve(result.states.size());
  for (std::size_t i = 0; i < result.states.size(); ++i) {
    const FlightState& s = result.states[i];
    const Eigen::Vector3d v = s.l / model.mass;
    const Eigen::Vector3d omega = angular_velocity(model, s.phi, s.w);
    trace.push_back(mechanical_power(result.wrenches[i].force, result.wrenches[i].torque, v, omega));
  }
  return trace;
}

std::vector<double> power_trace_per_thruster(const SimResult& result, const RobotModel& model) {
  std::vector<double> trace;
  trace.reserve(result.states.size());
  for (std::size_t i = 0; i < result.states.size(); ++i) {
    const FlightState& s = result.states[i];
    const Eigen::Vector3d v = s.l / model.mass;
    const Eigen::Vector3d omega = angular_velocity(model, s.phi, s.w);
    double power = 0.0;
    for (const ThrusterForce& f :
         thruster_forces(model, s.thrust, s.phi, result.inputs[i].delta_s)) {
      power += f.force.dot(v + omega.cross(f.arm));  // mount-point velocity
    }
    trace.push_back(power);
  }
  return trace;
}

Objectives evaluate_candidate(const Candidate& candidate, const ClusterSet& clusters,
                              const ModelRegistry& registry, const ReferenceTrajectory& trajectory,
                              const EvaluationConfig& config) {
  Objectives obj;
  if (candidate.centroid_index < 0 ||
      candidate.centroid_index >= static_cast<int>(clusters.centroid_model_ids.size())) {
    throw IdOutOfRange("centroid index " + std::to_string(candidate.centroid_index));
  }
  const int model_id = clusters.centroid_model_ids[candidate.centroid_index];
  const RobotModel& model = registry.get(model_id);

  const SimResult sim = simulate_closed_loop(model, candidate.weights, trajectory, config.mpc);
  if (sim.failed || sim.states.empty()) {
    obj.feasible = false;
    obj.failure_reason = sim.failure_reason;
    obj.mse_total = config.penalty;
    obj.energy = config.penalty;
    return obj;
  }
  obj.feasible = true;
  obj.failure_reason = FailureReason::None;
  obj.mse_total = tracking_mse(sim, trajectory);
  obj.energy = energy(power_trace(sim, model), config.mpc.dt);
  return obj;
}

std::string eval_record_to_json(const EvalRecord& record) {
  nlohmann::json j;
  j["candidate_id"] = record.candidate_id;
  j["generation"] = record.generation;
  j["centroid_index"] = record.centroid_index;
  j["model_id"] = record.model_id;
  j["weights"] = record.weights;
  j["mse_total"] = record.objectives.mse_total;
  j["energy"] = record.objectives.energy;
  j["feasible"] = record.objectives.feasible;
  j["failure_reason"] = to_string(record.objectives.failure_reason);
  return j.dump();
}

EvalRecord eval_record_from_json(const std::string& line, const std::string& path, int line_no) {
  try {
    const nlohmann::json j = nlohmann::json::parse(line);
    EvalRecord r;
    r.candidate_id = j.at("candidate_id").get<std::int64_t>();
    r.generation = j.at("generation").get<int>();
    r.centroid_index = j.at("centroid_index").get<int>();
    r.model_id = j.at("model_id").get<int>();
    const auto w = j.at("weights").get<std::vector<double>>();
    if (w.size() != 8) throw MalformedFile(path, line_no, "weights must have 8 entries");
    std::copy(w.begin(), w.end(), r.weights.begin());
    r.objectives.mse_total = j.at("mse_total").get<double>();
    r.objectives.energy = j.at("energy").get<double>();
    r.objectives.feasible = j.at("feasible").get<bool>();
    r.objectives.failure_reason = failure_reason_from_string(j.at("failure_reason").get<std::string>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedFile(path, line_no, e.what());
  }
}

}  // namespace codesign
