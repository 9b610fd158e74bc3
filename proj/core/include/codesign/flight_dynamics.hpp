#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "codesign/hover.hpp"
#include "codesign/robot_model.hpp"
#include "codesign/trajectory.hpp"

namespace codesign {

Eigen::Matrix3d skew(const Eigen::Vector3d& x);

/// Rotation from body to world for roll-pitch-yaw (ZYX convention):
/// R = Rz(yaw) Ry(pitch) Rx(roll).
Eigen::Matrix3d rpy_to_rotation(const Eigen::Vector3d& rpy);

/// State layout (n_x = 18 + 2 n_p):
///   x_com(3) l(3) phi(3) w(3) T(n_p) T_dot(n_p) e_x(3) e_phi(3)
struct FlightState {
  Eigen::Vector3d x_com = Eigen::Vector3d::Zero();  // world [m]
  Eigen::Vector3d l = Eigen::Vector3d::Zero();      // linear momentum, G[I] [kg m/s]
  Eigen::Vector3d phi = Eigen::Vector3d::Zero();    // roll-pitch-yaw [rad]
  Eigen::Vector3d w = Eigen::Vector3d::Zero();      // angular momentum, G[I] [kg m^2/s]
  Eigen::VectorXd thrust;                           // T [N], size n_p
  Eigen::VectorXd thrust_rate;                      // T_dot [N/s], size n_p
  Eigen::Vector3d e_x = Eigen::Vector3d::Zero();    // integral of position error [m s]
  Eigen::Vector3d e_phi = Eigen::Vector3d::Zero();  // integral of orientation error [rad s]

  static FlightState zero(int n_p);
  static int dimension(int n_p) { return 18 + 2 * n_p; }
  int num_thrusters() const { return static_cast<int>(thrust.size()); }

  Eigen::VectorXd to_vector() const;
  static FlightState from_vector(const Eigen::VectorXd& v, int n_p);
};

struct ControlInput {
  Eigen::VectorXd delta_s;  // joint displacement [rad], size n_j
  Eigen::VectorXd u_th;     // throttle in [0, 1], size n_p

  static ControlInput zero(int n_j, int n_p);
  static int dimension(int n_j, int n_p) { return n_j + n_p; }

  Eigen::VectorXd to_vector() const;
  static ControlInput from_vector(const Eigen::VectorXd& v, int n_j, int n_p);
};

struct Wrench {
  Eigen::Vector3d force = Eigen::Vector3d::Zero();   // world [N]
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();  // about CoM, world axes [N m]
};

struct ThrusterForce {
  Eigen::Vector3d force;  // world [N]
  Eigen::Vector3d arm;    // mount point relative to CoM, world axes [m]
};

/// Per-thruster world-frame forces and arms with joint displacement applied
/// through the precomputed linear sensitivities.
std::vector<ThrusterForce> thruster_forces(const RobotModel& model, const Eigen::VectorXd& thrust,
                                           const Eigen::Vector3d& phi, const Eigen::VectorXd& delta_s);

Wrench thrust_wrench(const RobotModel& model, const Eigen::VectorXd& thrust,
                     const Eigen::Vector3d& phi, const Eigen::VectorXd& delta_s);

/// Inertia at the frozen nominal pose, rotated to the world-aligned CoM frame.
Eigen::Matrix3d world_inertia(const RobotModel& model, const Eigen::Vector3d& phi);

Eigen::Vector3d angular_velocity(const RobotModel& model, const Eigen::Vector3d& phi,
                                 const Eigen::Vector3d& w);

/// Continuous-time state derivative. Throws GimbalLock near |pitch| = pi/2.
FlightState dynamics(const FlightState& state, const ControlInput& input, const RobotModel& model,
                     const ReferenceSample& reference);

struct HoverPoint {
  Eigen::VectorXd thrust;    // [N]
  Eigen::VectorXd throttle;  // T / T_max
};

/// Static hover equilibrium used as the linearization anchor.
/// Throws NoEquilibrium when the wrench balance has no in-limits solution.
HoverPoint hover_thrust(const RobotModel& model);

enum class Discretization { Euler, ZeroOrderHold };

struct LinearizedModel {
  Eigen::MatrixXd A;  // continuous, n_x x n_x
  Eigen::MatrixXd B;  // continuous, n_x x n_u
  Eigen::VectorXd c;  // affine drift: x_dot = A x + B u + c
  Eigen::MatrixXd Ad;
  Eigen::MatrixXd Bd;
  Eigen::VectorXd cd;
  double dt = 0.1;
  FlightState op_state;
  ControlInput op_input;
  ReferenceSample op_reference;
};

/// Central finite differences with per-component scaled steps.
LinearizedModel linearize(const RobotModel& model, const FlightState& op_state,
                          const ControlInput& op_input, const ReferenceSample& op_reference,
                          double dt, Discretization method = Discretization::Euler);

struct DiscreteSystem {
  Eigen::MatrixXd Ad;
  Eigen::MatrixXd Bd;
  Eigen::VectorXd cd;
};

DiscreteSystem discretize(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          const Eigen::VectorXd& c, double dt,
                          Discretization method = Discretization::Euler);

/// Classical RK4 with the input held over the step, sub-stepping at dt/5.
/// Thrust states are saturated into their limits after the step.
FlightState integrate(const FlightState& state, const ControlInput& input, const RobotModel& model,
                      const ReferenceSample& reference, double dt);

/// Generic RK4 stage for f(t, x); exposed for tests and reused by integrate.
Eigen::VectorXd rk4_step(const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& x, double t, double h);

}  // namespace codesign
