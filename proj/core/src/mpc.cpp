#include "codesign/mpc.hpp"

#include <cmath>

namespace codesign {

double ControlWeights::operator[](int i) const { return const_cast<ControlWeights&>(*this)[i]; }

double& ControlWeights::operator[](int i) {
  switch (i) {
    case 0: return w_x;
    case 1: return w_l;
    case 2: return w_phi;
    case 3: return w_omega;
    case 4: return w_ex;
    case 5: return w_ephi;
    case 6: return w_ds;
    case 7: return w_uth;
    default: throw IdOutOfRange("control weight index " + std::to_string(i));
  }
}

void ControlWeights::validate() const {
  for (int i = 0; i < 8; ++i) {
    if (!((*this)[i] > 0.0)) throw InvalidRange("control weights must be strictly positive");
  }
}

const char* to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::None: return "none";
    case FailureReason::QpFailure: return "qp_failure";
    case FailureReason::GimbalLock: return "gimbal_lock";
    case FailureReason::ErrorThreshold: return "error_threshold";
  }
  return "unknown";
}

FailureReason failure_reason_from_string(const std::string& name) {
  if (name == "none") return FailureReason::None;
  if (name == "qp_failure") return FailureReason::QpFailure;
  if (name == "gimbal_lock") return FailureReason::GimbalLock;
  if (name == "error_threshold") return FailureReason::ErrorThreshold;
  throw Error("unknown failure reason '" + name + "'");
}

namespace {

// Stage weights on the state, following the cost convention
// 1/2 sum w ||.||^2 for the first six terms; the two integral terms carry no
// 1/2 factor, so they enter doubled here.
Eigen::VectorXd stage_state_weights(const ControlWeights& w, int n_p) {
  Eigen::VectorXd q = Eigen::VectorXd::Zero(FlightState::dimension(n_p));
  q.segment<3>(0).setConstant(w.w_x);
  q.segment<3>(3).setConstant(w.w_l);
  q.segment<3>(6).setConstant(w.w_phi);
  q.segment<3>(9).setConstant(w.w_omega);
  q.segment<3>(12 + 2 * n_p).setConstant(2.0 * w.w_ex);
  q.segment<3>(15 + 2 * n_p).setConstant(2.0 * w.w_ephi);
  return q;
}

Eigen::VectorXd reference_state(const ReferenceSample& ref, int n_p) {
  FlightState target = FlightState::zero(n_p);
  target.x_com = ref.x_ref;
  target.phi = ref.phi_ref;
  return target.to_vector();
}

}  // namespace

QpProblem build_qp(const LinearizedModel& lin, const ControlWeights& weights,
                   const FlightState& state, const std::vector<ReferenceSample>& window,
                   const Eigen::VectorXd& previous_throttle, double delta_s_max) {
  const int n_x = static_cast<int>(lin.Ad.rows());
  const int n_u = static_cast<int>(lin.Bd.cols());
  const int horizon = static_cast<int>(window.size());
  if (horizon < 1) throw DimensionMismatch("reference window must hold at least one sample");
  const int n_p = state.num_thrusters();
  const int n_j = n_u - n_p;
  if (n_j < 0 || lin.Ad.cols() != n_x || state.to_vector().size() != n_x ||
      previous_throttle.size() != n_p) {
    throw DimensionMismatch("linearized model, state and throttle sizes disagree");
  }

  // Prediction over the horizon: x_k = reach_k + Su_k Z with Z the stacked
  // inputs. The e_x drift is corrected per step for the moving reference.
  const int n_z = horizon * n_u;
  std::vector<Eigen::MatrixXd> su(horizon);   // n_x x n_z, row blocks of the condensed map
  std::vector<Eigen::VectorXd> reach(horizon);
  Eigen::VectorXd x_prev = state.to_vector();
  Eigen::MatrixXd su_prev = Eigen::MatrixXd::Zero(n_x, n_z);
  for (int k = 0; k < horizon; ++k) {
    Eigen::VectorXd cd_k = lin.cd;
    cd_k.segment<3>(12 + 2 * n_p) += (lin.op_reference.x_ref - window[k].x_ref) * lin.dt;
    cd_k.segment<3>(15 + 2 * n_p) += (lin.op_reference.phi_ref - window[k].phi_ref) * lin.dt;
    reach[k] = lin.Ad * x_prev + cd_k;
    su[k] = lin.Ad * su_prev;
    su[k].block(0, k * n_u, n_x, n_u) = lin.Bd;
    x_prev = reach[k];
    su_prev = su[k];
  }

  const Eigen::VectorXd q = stage_state_weights(weights, n_p);
  QpProblem qp;
  qp.hessian = Eigen::MatrixXd::Zero(n_z, n_z);
  qp.gradient = Eigen::VectorXd::Zero(n_z);

  for (int k = 0; k < horizon; ++k) {
    const Eigen::VectorXd target = reference_state(window[k], n_p);
    const Eigen::MatrixXd weighted = q.asDiagonal() * su[k];
    qp.hessian.noalias() += su[k].transpose() * weighted;
    qp.gradient.noalias() += weighted.transpose() * (reach[k] - target);
  }

  // Input terms: joint displacement per step, throttle rate across steps
  // anchored at the previously applied throttle.
  for (int k = 0; k < horizon; ++k) {
    for (int j = 0; j < n_j; ++j) {
      qp.hessian(k * n_u + j, k * n_u + j) += weights.w_ds;
    }
    for (int p = 0; p < n_p; ++p) {
      const int idx = k * n_u + n_j + p;
      qp.hessian(idx, idx) += weights.w_uth;
      if (k == 0) {
        qp.gradient(idx) -= weights.w_uth * previous_throttle[p];
      } else {
        const int prev = (k - 1) * n_u + n_j + p;
        qp.hessian(idx, prev) -= weights.w_uth;
        qp.hessian(prev, idx) -= weights.w_uth;
        qp.hessian(prev, prev) += weights.w_uth;
      }
    }
  }
  qp.hessian = 0.5 * (qp.hessian + qp.hessian.transpose());

  qp.lower.resize(n_z);
  qp.upper.resize(n_z);
  for (int k = 0; k < horizon; ++k) {
    qp.lower.segment(k * n_u, n_j).setConstant(-delta_s_max);
    qp.upper.segment(k * n_u, n_j).setConstant(delta_s_max);
    qp.lower.segment(k * n_u + n_j, n_p).setConstant(0.0);
    qp.upper.segment(k * n_u + n_j, n_p).setConstant(1.0);
  }
  return qp;
}

MpcStepResult mpc_step(const RobotModel& model, const LinearizedModel& lin,
                       const ControlWeights& weights, const FlightState& state,
                       const std::vector<ReferenceSample>& window,
                       const Eigen::VectorXd& previous_throttle,
                       const std::optional<Eigen::VectorXd>& warm_start, const MpcConfig& config) {
  const QpProblem qp = build_qp(lin, weights, state, window, previous_throttle, model.delta_s_max);
  QpSolution sol = solve_qp(qp, warm_start, config.qp);
  if (sol.status != QpStatus::Optimal) {
    throw StepFailed(std::string("QP solve ended with status ") + to_string(sol.status));
  }
  const int n_u = static_cast<int>(lin.Bd.cols());
  MpcStepResult out;
  out.input = ControlInput::from_vector(sol.solution.head(n_u), model.num_joints(),
                                        model.num_thrusters());
  out.qp = std::move(sol);
  return out;
}

SimResult simulate_closed_loop(const RobotModel& model, const ControlWeights& weights,
                               const ReferenceTrajectory& trajectory, const MpcConfig& config) {
  SimResult result;
  const int n_p = model.num_thrusters();
  const int n_u = ControlInput::dimension(model.num_joints(), n_p);
  const double dt = config.dt;
  const int steps = static_cast<int>(std::floor(trajectory.duration() / dt + 1e-9));

  ControlInput u_prev = ControlInput::zero(model.num_joints(), n_p);
  FlightState state = FlightState::zero(n_p);
  try {
    const HoverPoint hover = hover_thrust(model);
    const ReferenceSample start = trajectory.at(0.0);
    state.x_com = start.x_ref;
    state.l = model.mass * start.v_ref;
    state.thrust = hover.thrust;
    u_prev.u_th = hover.throttle;
  } catch (const NoEquilibrium&) {
    result.failed = true;
    result.failure_reason = FailureReason::QpFailure;
    return result;
  }

  LinearizedModel lin;
  std::optional<Eigen::VectorXd> warm;
  for (int k = 0; k < steps; ++k) {
    const double t = k * dt;
    const ReferenceSample ref = trajectory.at(t);
    if ((state.x_com - ref.x_ref).norm() > config.error_threshold) {
      result.failed = true;
      result.failure_reason = FailureReason::ErrorThreshold;
      break;
    }

    try {
      if (k % config.relinearize_every == 0) {
        lin = linearize(model, state, u_prev, ref, dt, config.discretization);
      }
      std::vector<ReferenceSample> window(config.horizon);
      for (int i = 0; i < config.horizon; ++i) window[i] = trajectory.at(t + (i + 1) * dt);

      const MpcStepResult step = mpc_step(model, lin, weights, state, window, u_prev.u_th, warm, config);

      result.times.push_back(t);
      result.states.push_back(state);
      result.inputs.push_back(step.input);
      result.wrenches.push_back(thrust_wrench(model, state.thrust, state.phi, step.input.delta_s));

      // Shift the solution one block for the next warm start.
      Eigen::VectorXd shifted = step.qp.solution;
      const int n_z = static_cast<int>(shifted.size());
      shifted.head(n_z - n_u) = step.qp.solution.tail(n_z - n_u);
      warm = shifted;

      state = integrate(state, step.input, model, ref, dt);
      u_prev = step.input;
      result.steps_completed = k + 1;
    } catch (const StepFailed&) {
      result.failed = true;
      result.failure_reason = FailureReason::QpFailure;
      break;
    } catch (const GimbalLock&) {
      result.failed = true;
      result.failure_reason = FailureReason::GimbalLock;
      break;
    }
  }

  // Final-position check so the last reference sample is also enforced.
  if (!result.failed && (state.x_com - trajectory.at(steps * dt).x_ref).norm() > config.error_threshold) {
    result.failed = true;
    result.failure_reason = FailureReason::ErrorThreshold;
  }
  return result;
}

}  // namespace codesign
