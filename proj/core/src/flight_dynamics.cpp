#include "codesign/flight_dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace codesign {

Eigen::Matrix3d skew(const Eigen::Vector3d& x) {
  Eigen::Matrix3d s;
  s << 0.0, -x.z(), x.y(), x.z(), 0.0, -x.x(), -x.y(), x.x(), 0.0;
  return s;
}

Eigen::Matrix3d rpy_to_rotation(const Eigen::Vector3d& rpy) {
  return (Eigen::AngleAxisd(rpy.z(), Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(rpy.y(), Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(rpy.x(), Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

FlightState FlightState::zero(int n_p) {
  FlightState s;
  s.thrust = Eigen::VectorXd::Zero(n_p);
  s.thrust_rate = Eigen::VectorXd::Zero(n_p);
  return s;
}

Eigen::VectorXd FlightState::to_vector() const {
  const int n_p = num_thrusters();
  Eigen::VectorXd v(dimension(n_p));
  v.segment<3>(0) = x_com;
  v.segment<3>(3) = l;
  v.segment<3>(6) = phi;
  v.segment<3>(9) = w;
  v.segment(12, n_p) = thrust;
  v.segment(12 + n_p, n_p) = thrust_rate;
  v.segment<3>(12 + 2 * n_p) = e_x;
  v.segment<3>(15 + 2 * n_p) = e_phi;
  return v;
}

FlightState FlightState::from_vector(const Eigen::VectorXd& v, int n_p) {
  FlightState s;
  s.x_com = v.segment<3>(0);
  s.l = v.segment<3>(3);
  s.phi = v.segment<3>(6);
  s.w = v.segment<3>(9);
  s.thrust = v.segment(12, n_p);
  s.thrust_rate = v.segment(12 + n_p, n_p);
  s.e_x = v.segment<3>(12 + 2 * n_p);
  s.e_phi = v.segment<3>(15 + 2 * n_p);
  return s;
}

ControlInput ControlInput::zero(int n_j, int n_p) {
  ControlInput u;
  u.delta_s = Eigen::VectorXd::Zero(n_j);
  u.u_th = Eigen::VectorXd::Zero(n_p);
  return u;
}

Eigen::VectorXd ControlInput::to_vector() const {
  Eigen::VectorXd v(delta_s.size() + u_th.size());
  v.head(delta_s.size()) = delta_s;
  v.tail(u_th.size()) = u_th;
  return v;
}

ControlInput ControlInput::from_vector(const Eigen::VectorXd& v, int n_j, int n_p) {
  ControlInput u;
  u.delta_s = v.head(n_j);
  u.u_th = v.tail(n_p);
  return u;
}

std::vector<ThrusterForce> thruster_forces(const RobotModel& model, const Eigen::VectorXd& thrust,
                                           const Eigen::Vector3d& phi, const Eigen::VectorXd& delta_s) {
  const Eigen::Matrix3d rot = rpy_to_rotation(phi);
  std::vector<ThrusterForce> forces;
  forces.reserve(model.thrusters.size());
  for (int k = 0; k < model.num_thrusters(); ++k) {
    const Thruster& t = model.thrusters[k];
    const Eigen::Vector3d dir_body = (t.a + t.da_ds * delta_s).normalized();
    const Eigen::Vector3d arm_body = t.r + t.dr_ds * delta_s;
    forces.push_back({rot * dir_body * thrust[k], rot * arm_body});
  }
  return forces;
}

Wrench thrust_wrench(const RobotModel& model, const Eigen::VectorXd& thrust,
                     const Eigen::Vector3d& phi, const Eigen::VectorXd& delta_s) {
  Wrench wrench;
  for (const ThrusterForce& f : thruster_forces(model, thrust, phi, delta_s)) {
    wrench.force += f.force;
    wrench.torque += f.arm.cross(f.force);
  }
  return wrench;
}

Eigen::Matrix3d world_inertia(const RobotModel& model, const Eigen::Vector3d& phi) {
  const Eigen::Matrix3d rot = rpy_to_rotation(phi);
  return rot * model.inertia * rot.transpose();
}

Eigen::Vector3d angular_velocity(const RobotModel& model, const Eigen::Vector3d& phi,
                                 const Eigen::Vector3d& w) {
  return world_inertia(model, phi).ldlt().solve(w);
}

namespace {

// Columns map (roll, pitch, yaw) rates to the world angular velocity for the
// ZYX convention; det = cos(pitch).
Eigen::Matrix3d rpy_rate_map(const Eigen::Vector3d& rpy) {
  const double sy = std::sin(rpy.z()), cy = std::cos(rpy.z());
  const double sp = std::sin(rpy.y()), cp = std::cos(rpy.y());
  Eigen::Matrix3d e;
  e << cy * cp, -sy, 0.0, sy * cp, cy, 0.0, -sp, 0.0, 1.0;
  return e;
}

void check_gimbal(const Eigen::Vector3d& phi) {
  if (std::abs(phi.y()) >= M_PI / 2.0 - 1e-6) {
    throw GimbalLock("pitch " + std::to_string(phi.y()) + " rad is at the representation singularity");
  }
}

}  // namespace

FlightState dynamics(const FlightState& state, const ControlInput& input, const RobotModel& model,
                     const ReferenceSample& reference) {
  check_gimbal(state.phi);
  const int n_p = model.num_thrusters();

  const Wrench wrench = thrust_wrench(model, state.thrust, state.phi, input.delta_s);
  const Eigen::Vector3d omega = angular_velocity(model, state.phi, state.w);

  FlightState dot = FlightState::zero(n_p);
  dot.x_com = state.l / model.mass;
  dot.l = -model.mass * kGravity * Eigen::Vector3d::UnitZ() + wrench.force;
  dot.phi = rpy_rate_map(state.phi).inverse() * omega;
  dot.w = wrench.torque;
  dot.thrust = state.thrust_rate;
  for (int k = 0; k < n_p; ++k) {
    const Thruster& t = model.thrusters[k];
    const double commanded = t.t_max * input.u_th[k];
    dot.thrust_rate[k] =
        t.omega_n * t.omega_n * (commanded - state.thrust[k]) - 2.0 * t.zeta * t.omega_n * state.thrust_rate[k];
  }
  dot.e_x = state.x_com - reference.x_ref;
  dot.e_phi = state.phi - reference.phi_ref;
  return dot;
}

HoverPoint hover_thrust(const RobotModel& model) {
  const HoverSolution sol = solve_static_hover(model);
  if (!sol.balanced || !sol.within_limits) {
    throw NoEquilibrium("static hover wrench balance has no in-limits solution (residual " +
                        std::to_string(sol.residual) + ")");
  }
  HoverPoint hover;
  hover.thrust = sol.thrust;
  hover.throttle.resize(model.num_thrusters());
  for (int k = 0; k < model.num_thrusters(); ++k) {
    hover.throttle[k] = sol.thrust[k] / model.thrusters[k].t_max;
  }
  return hover;
}

DiscreteSystem discretize(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          const Eigen::VectorXd& c, double dt, Discretization method) {
  const int n_x = static_cast<int>(A.rows());
  const int n_u = static_cast<int>(B.cols());
  DiscreteSystem d;
  if (method == Discretization::Euler) {
    d.Ad = Eigen::MatrixXd::Identity(n_x, n_x) + A * dt;
    d.Bd = B * dt;
    d.cd = c * dt;
    return d;
  }
  // Exact hold: exponentiate the augmented [A B c; 0 0 0] generator.
  const int n = n_x + n_u + 1;
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(n, n);
  gen.topLeftCorner(n_x, n_x) = A;
  gen.block(0, n_x, n_x, n_u) = B;
  gen.col(n - 1).head(n_x) = c;
  const Eigen::MatrixXd expd = (gen * dt).exp();
  d.Ad = expd.topLeftCorner(n_x, n_x);
  d.Bd = expd.block(0, n_x, n_x, n_u);
  d.cd = expd.col(n - 1).head(n_x);
  return d;
}

LinearizedModel linearize(const RobotModel& model, const FlightState& op_state,
                          const ControlInput& op_input, const ReferenceSample& op_reference,
                          double dt, Discretization method) {
  check_gimbal(op_state.phi);
  const int n_p = model.num_thrusters();
  const int n_j = model.num_joints();
  const Eigen::VectorXd x0 = op_state.to_vector();
  const Eigen::VectorXd u0 = op_input.to_vector();
  const int n_x = static_cast<int>(x0.size());
  const int n_u = static_cast<int>(u0.size());

  auto f = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    return dynamics(FlightState::from_vector(x, n_p), ControlInput::from_vector(u, n_j, n_p), model,
                    op_reference)
        .to_vector();
  };

  LinearizedModel lin;
  lin.A.resize(n_x, n_x);
  lin.B.resize(n_x, n_u);
  for (int i = 0; i < n_x; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x0[i]));
    Eigen::VectorXd hi = x0, lo = x0;
    hi[i] += h;
    lo[i] -= h;
    lin.A.col(i) = (f(hi, u0) - f(lo, u0)) / (2.0 * h);
  }
  for (int i = 0; i < n_u; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(u0[i]));
    Eigen::VectorXd hi = u0, lo = u0;
    hi[i] += h;
    lo[i] -= h;
    lin.B.col(i) = (f(x0, hi) - f(x0, lo)) / (2.0 * h);
  }
  lin.c = f(x0, u0) - lin.A * x0 - lin.B * u0;
  lin.dt = dt;
  const DiscreteSystem d = discretize(lin.A, lin.B, lin.c, dt, method);
  lin.Ad = d.Ad;
  lin.Bd = d.Bd;
  lin.cd = d.cd;
  lin.op_state = op_state;
  lin.op_input = op_input;
  lin.op_reference = op_reference;
  return lin;
}

Eigen::VectorXd rk4_step(const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& x, double t, double h) {
  const Eigen::VectorXd k1 = f(t, x);
  const Eigen::VectorXd k2 = f(t + h / 2.0, x + (h / 2.0) * k1);
  const Eigen::VectorXd k3 = f(t + h / 2.0, x + (h / 2.0) * k2);
  const Eigen::VectorXd k4 = f(t + h, x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

FlightState integrate(const FlightState& state, const ControlInput& input, const RobotModel& model,
                      const ReferenceSample& reference, double dt) {
  const int n_p = model.num_thrusters();
  auto f = [&](double, const Eigen::VectorXd& x) {
    return dynamics(FlightState::from_vector(x, n_p), input, model, reference).to_vector();
  };

  Eigen::VectorXd x = state.to_vector();
  const int substeps = 5;
  const double h = dt / substeps;
  for (int i = 0; i < substeps; ++i) {
    x = rk4_step(f, x, i * h, h);
  }
  FlightState next = FlightState::from_vector(x, n_p);
  for (int k = 0; k < n_p; ++k) {
    next.thrust[k] = std::clamp(next.thrust[k], model.thrusters[k].t_min, model.thrusters[k].t_max);
  }
  return next;
}

}  // namespace codesign
