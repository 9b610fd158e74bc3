#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "codesign/flight_dynamics.hpp"
#include "codesign/qp.hpp"
#include "codesign/trajectory.hpp"

namespace codesign {

/// The eight tunable cost weights, one isotropic scalar per term. Momentum
/// weights are small because l, w carry the 45 kg mass scale.
struct ControlWeights {
  double w_x = 300.0;     // CoM position error
  double w_l = 0.01;      // linear momentum
  double w_phi = 50.0;    // orientation error
  double w_omega = 0.01;  // angular momentum
  double w_ex = 5.0;      // integral of position error
  double w_ephi = 1.0;    // integral of orientation error
  double w_ds = 0.5;      // joint displacement
  double w_uth = 1.0;     // throttle rate change

  double operator[](int i) const;
  double& operator[](int i);
  void validate() const;  // all strictly positive
};

struct MpcConfig {
  int horizon = 10;            // N steps
  double dt = 0.1;             // control period [s]
  int relinearize_every = 10;  // steps between Jacobian refreshes
  Discretization discretization = Discretization::Euler;
  // Ill-conditioned weight corners need far more first-order iterations than
  // the solver's generic default before MaxIter may be called a failure.
  QpSettings qp{.max_iter = 20000, .tol = 1e-6};
  double error_threshold = 2.5;  // [m], tracking abort per the evaluation constraints
};

/// Condensed box QP over the stacked input sequence. The reference window
/// must hold `horizon` samples; `previous_throttle` anchors the first
/// throttle-rate term.
QpProblem build_qp(const LinearizedModel& lin, const ControlWeights& weights,
                   const FlightState& state, const std::vector<ReferenceSample>& window,
                   const Eigen::VectorXd& previous_throttle, double delta_s_max);

struct MpcStepResult {
  ControlInput input;
  QpSolution qp;
};

/// Solves the horizon QP and returns the first input block.
/// Throws StepFailed when the solver does not reach Optimal.
MpcStepResult mpc_step(const RobotModel& model, const LinearizedModel& lin,
                       const ControlWeights& weights, const FlightState& state,
                       const std::vector<ReferenceSample>& window,
                       const Eigen::VectorXd& previous_throttle,
                       const std::optional<Eigen::VectorXd>& warm_start, const MpcConfig& config);

enum class FailureReason { None, QpFailure, GimbalLock, ErrorThreshold };

const char* to_string(FailureReason reason);
FailureReason failure_reason_from_string(const std::string& name);

struct SimResult {
  std::vector<double> times;
  std::vector<FlightState> states;   // state at each control step, pre-update
  std::vector<ControlInput> inputs;  // applied input
  std::vector<Wrench> wrenches;      // thrust wrench at the applied input
  bool failed = false;
  FailureReason failure_reason = FailureReason::None;
  int steps_completed = 0;
};

/// Receding-horizon loop at the control period: periodic relinearization
/// about the current state, QP solve, first-input application, RK4
/// propagation. Failures are encoded in the result, never thrown.
SimResult simulate_closed_loop(const RobotModel& model, const ControlWeights& weights,
                               const ReferenceTrajectory& trajectory, const MpcConfig& config);

}  // namespace codesign
