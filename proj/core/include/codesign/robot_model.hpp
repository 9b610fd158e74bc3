#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "codesign/design_space.hpp"

namespace codesign {

struct Thruster {
  Eigen::Vector3d r = Eigen::Vector3d::Zero();  // mount point relative to CoM, body frame [m]
  Eigen::Vector3d a = Eigen::Vector3d::UnitZ(); // thrust direction, body frame, unit norm
  double t_min = 0.0;                           // [N]
  double t_max = 0.0;                           // [N]
  double omega_n = 6.0;                         // turbine natural frequency [rad/s]
  double zeta = 0.9;                            // turbine damping ratio
  // First-order joint influence about the nominal pose, one column per joint.
  Eigen::Matrix3Xd dr_ds;
  Eigen::Matrix3Xd da_ds;
};

enum class ThrusterRole { Jetpack, LeftArm, RightArm };

struct ThrusterSpec {
  ThrusterRole role = ThrusterRole::Jetpack;
  Eigen::Vector3d mount = Eigen::Vector3d::Zero();  // body frame, relative to body origin [m]
  Eigen::Vector3d direction = Eigen::Vector3d::UnitZ();
  double t_min = 0.0;
  double t_max = 0.0;
  double omega_n = 6.0;
  double zeta = 0.9;
  int tilt_sign = 0;  // jetpack only: sign of the jet_angle rotation about the pitch axis
};

enum class PrimitiveShape { Box, Cylinder };

/// Uniform-density primitive whose length along `axis` is one geometric
/// parameter (converted mm -> m). Box cross-section is dims (width, height);
/// a cylinder uses dims.x() as radius.
struct LinkPrimitive {
  std::string param;  // name of the driving GeometricParams field
  PrimitiveShape shape = PrimitiveShape::Box;
  double density = 1000.0;               // [kg/m^3]
  Eigen::Vector2d dims = {0.05, 0.05};   // [m]
  Eigen::Vector3d base_point = Eigen::Vector3d::Zero();  // growth start, body frame [m]
  Eigen::Vector3d axis = Eigen::Vector3d::UnitX();       // growth direction, unit norm
};

struct JointSpec {
  std::string name;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitY();   // body frame
  Eigen::Vector3d pivot = Eigen::Vector3d::Zero();   // body frame [m]
  int thruster_index = -1;                           // thruster this joint carries
};

struct BaseRobotSpec {
  double base_mass = 0.0;                            // [kg]
  Eigen::Vector3d base_com = Eigen::Vector3d::Zero();
  Eigen::Matrix3d base_inertia = Eigen::Matrix3d::Identity();  // about base_com [kg m^2]
  std::vector<LinkPrimitive> primitives;
  std::vector<ThrusterSpec> thrusters;
  std::vector<JointSpec> joints;
  double delta_s_max = 0.2;  // [rad]

  void validate() const;  // throws InvalidRange on bad numbers
};

/// Documented default stand-in for the physical baseline: 45 kg torso,
/// two forearm thrusters and two dorsal centerline jetpack thrusters.
BaseRobotSpec default_base_spec();

struct RobotModel {
  int model_id = -1;
  GeometricParams params;
  double mass = 0.0;
  Eigen::Vector3d com = Eigen::Vector3d::Zero();    // body frame [m]
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero(); // about CoM [kg m^2]
  std::vector<Thruster> thrusters;
  double delta_s_max = 0.2;

  int num_thrusters() const { return static_cast<int>(thrusters.size()); }
  int num_joints() const {
    return thrusters.empty() ? 0 : static_cast<int>(thrusters.front().dr_ds.cols());
  }
  double total_t_max() const;
};

/// Pure surrogate for CAD mass-property extraction: composes the base body
/// with the parameter-scaled primitives and re-derives CoM, inertia and
/// thruster poses.
RobotModel build_model(const GeometricParams& params, const BaseRobotSpec& base);

struct FeasibilityConfig {
  double hover_margin = 1.2;
  Eigen::Vector3d com_box = {0.15, 0.10, 0.15};  // allowed |com - base_com| per axis [m]
};

/// Rule-based stand-in for the FEM/assembly screen: thrust headroom, static
/// hover solvability within thrust limits, CoM inside the configured box.
bool feasibility_filter(const RobotModel& model, const BaseRobotSpec& base,
                        const FeasibilityConfig& config = {});

inline constexpr double kGravity = 9.81;  // [m/s^2]

}  // namespace codesign
