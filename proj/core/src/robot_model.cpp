#include "codesign/robot_model.hpp"

#include <cmath>

#include "codesign/hover.hpp"
#include "codesign/qp.hpp"

namespace codesign {

namespace {

constexpr double kMmToM = 1e-3;
constexpr double kDegToRad = M_PI / 180.0;

Eigen::Matrix3d rot_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Eigen::Matrix3d r;
  r << c, 0, s, 0, 1, 0, -s, 0, c;
  return r;
}

// Orthonormal basis with `axis` as the local z column.
Eigen::Matrix3d frame_from_axis(const Eigen::Vector3d& axis) {
  const Eigen::Vector3d z = axis.normalized();
  Eigen::Vector3d helper = std::abs(z.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d x = helper.cross(z).normalized();
  const Eigen::Vector3d y = z.cross(x);
  Eigen::Matrix3d r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  return r;
}

struct BodyContribution {
  double mass = 0.0;
  Eigen::Vector3d com = Eigen::Vector3d::Zero();
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();  // about own CoM, body axes
};

// Inertia of the primitive grown to `length` along its axis, about its own CoM.
BodyContribution primitive_body(const LinkPrimitive& prim, double length) {
  BodyContribution body;
  if (length <= 0.0) return body;

  double ixx, iyy, izz;
  if (prim.shape == PrimitiveShape::Box) {
    const double w = prim.dims.x(), h = prim.dims.y();
    body.mass = prim.density * w * h * length;
    ixx = body.mass / 12.0 * (h * h + length * length);
    iyy = body.mass / 12.0 * (w * w + length * length);
    izz = body.mass / 12.0 * (w * w + h * h);
  } else {
    const double r = prim.dims.x();
    body.mass = prim.density * M_PI * r * r * length;
    ixx = iyy = body.mass / 12.0 * (3.0 * r * r + length * length);
    izz = 0.5 * body.mass * r * r;
  }
  Eigen::Matrix3d local = Eigen::Vector3d(ixx, iyy, izz).asDiagonal();
  const Eigen::Matrix3d frame = frame_from_axis(prim.axis);
  body.inertia = frame * local * frame.transpose();
  body.com = prim.base_point + prim.axis * (length / 2.0);
  return body;
}

Eigen::Matrix3d parallel_axis(const Eigen::Matrix3d& inertia_at_com, double mass,
                              const Eigen::Vector3d& d) {
  return inertia_at_com + mass * (d.squaredNorm() * Eigen::Matrix3d::Identity() - d * d.transpose());
}

double param_by_name(const GeometricParams& p, const std::string& name) {
  const auto& names = geometric_param_names();
  for (int i = 0; i < kNumGeometricParams; ++i) {
    if (names[i] == name) return p[i];
  }
  throw InvalidRange("unknown primitive parameter '" + name + "'");
}

}  // namespace

void BaseRobotSpec::validate() const {
  if (!(base_mass > 0.0)) throw InvalidRange("base_mass must be positive");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(base_inertia);
  if (es.eigenvalues().minCoeff() <= 0.0) throw InvalidRange("base_inertia must be positive definite");
  for (const ThrusterSpec& t : thrusters) {
    if (std::abs(t.direction.norm() - 1.0) > 1e-9) throw InvalidRange("thrust direction must be unit norm");
    if (t.t_min < 0.0 || !(t.t_max > t.t_min)) throw InvalidRange("thrust limits must satisfy 0 <= T_min < T_max");
    if (!(t.omega_n > 0.0) || !(t.zeta > 0.0)) throw InvalidRange("turbine lag coefficients must be positive");
  }
  for (const JointSpec& j : joints) {
    if (j.thruster_index < 0 || j.thruster_index >= static_cast<int>(thrusters.size())) {
      throw InvalidRange("joint '" + j.name + "' references invalid thruster");
    }
  }
}

BaseRobotSpec default_base_spec() {
  BaseRobotSpec spec;
  spec.base_mass = 45.0;
  spec.base_com = {0.0, 0.0, -0.05};
  spec.base_inertia = Eigen::Vector3d(2.5, 2.2, 1.0).asDiagonal();
  spec.delta_s_max = 0.2;

  // Dorsal centerline jetpack pair (mirrored tilt) plus the two forearm jets.
  ThrusterSpec jet_upper;
  jet_upper.role = ThrusterRole::Jetpack;
  jet_upper.mount = {-0.18, 0.0, 0.30};
  jet_upper.t_max = 250.0;
  jet_upper.tilt_sign = +1;
  ThrusterSpec jet_lower = jet_upper;
  jet_lower.mount = {-0.18, 0.0, 0.12};
  jet_lower.tilt_sign = -1;
  ThrusterSpec arm_left;
  arm_left.role = ThrusterRole::LeftArm;
  arm_left.mount = {0.30, 0.22, 0.05};
  arm_left.t_max = 220.0;
  ThrusterSpec arm_right = arm_left;
  arm_right.role = ThrusterRole::RightArm;
  arm_right.mount = {0.30, -0.22, 0.05};
  spec.thrusters = {jet_upper, jet_lower, arm_left, arm_right};

  spec.joints = {
      {"shoulder_pitch_left", Eigen::Vector3d::UnitY(), {0.0, 0.20, 0.30}, 2},
      {"shoulder_pitch_right", Eigen::Vector3d::UnitY(), {0.0, -0.20, 0.30}, 3},
  };

  auto mirrored = [&](LinkPrimitive prim, double y) {
    prim.base_point.y() = y;
    spec.primitives.push_back(prim);
  };
  LinkPrimitive forearm{"forearm_len", PrimitiveShape::Cylinder, 1500.0, {0.035, 0.0}, {0.10, 0.0, 0.05}, Eigen::Vector3d::UnitX()};
  mirrored(forearm, 0.20);
  mirrored(forearm, -0.20);
  LinkPrimitive shoulder{"shoulder_width", PrimitiveShape::Box, 1200.0, {0.08, 0.08}, {0.0, 0.0, 0.30}, Eigen::Vector3d::UnitY()};
  mirrored(shoulder, 0.18);
  LinkPrimitive shoulder_r = shoulder;
  shoulder_r.axis = -Eigen::Vector3d::UnitY();
  mirrored(shoulder_r, -0.18);
  LinkPrimitive hip{"hip_distance", PrimitiveShape::Box, 1300.0, {0.09, 0.09}, {0.0, 0.0, -0.20}, Eigen::Vector3d::UnitY()};
  mirrored(hip, 0.08);
  LinkPrimitive hip_r = hip;
  hip_r.axis = -Eigen::Vector3d::UnitY();
  mirrored(hip_r, -0.08);
  LinkPrimitive ankle{"ankle_height", PrimitiveShape::Box, 1100.0, {0.05, 0.05}, {0.02, 0.0, -0.55}, -Eigen::Vector3d::UnitZ()};
  mirrored(ankle, 0.09);
  mirrored(ankle, -0.09);
  LinkPrimitive foot{"foot_length", PrimitiveShape::Box, 900.0, {0.07, 0.03}, {0.05, 0.0, -0.62}, Eigen::Vector3d::UnitX()};
  mirrored(foot, 0.09);
  mirrored(foot, -0.09);

  return spec;
}

double RobotModel::total_t_max() const {
  double total = 0.0;
  for (const Thruster& t : thrusters) total += t.t_max;
  return total;
}

RobotModel build_model(const GeometricParams& params, const BaseRobotSpec& base) {
  RobotModel model;
  model.params = params;
  model.delta_s_max = base.delta_s_max;

  std::vector<BodyContribution> bodies;
  bodies.push_back({base.base_mass, base.base_com, base.base_inertia});
  for (const LinkPrimitive& prim : base.primitives) {
    const double length = param_by_name(params, prim.param) * kMmToM;
    BodyContribution body = primitive_body(prim, length);
    if (body.mass > 0.0) bodies.push_back(body);
  }

  double mass = 0.0;
  Eigen::Vector3d weighted = Eigen::Vector3d::Zero();
  for (const BodyContribution& b : bodies) {
    mass += b.mass;
    weighted += b.mass * b.com;
  }
  model.mass = mass;
  model.com = weighted / mass;
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();
  for (const BodyContribution& b : bodies) {
    inertia += parallel_axis(b.inertia, b.mass, b.com - model.com);
  }
  model.inertia = inertia;

  const double jet_angle = params.jet_angle * kDegToRad;
  const double jet_offset = params.jet_offset * kMmToM;
  const double jet_height = params.jet_height * kMmToM;
  const double forearm = params.forearm_len * kMmToM;
  const double shoulder = params.shoulder_width * kMmToM;

  const int n_joints = static_cast<int>(base.joints.size());
  std::vector<Eigen::Vector3d> mounts(base.thrusters.size());
  for (std::size_t k = 0; k < base.thrusters.size(); ++k) {
    const ThrusterSpec& spec = base.thrusters[k];
    Thruster t;
    Eigen::Vector3d mount = spec.mount;
    Eigen::Vector3d dir = spec.direction;
    switch (spec.role) {
      case ThrusterRole::Jetpack:
        mount += Eigen::Vector3d(-jet_offset, 0.0, jet_height);
        dir = rot_y(spec.tilt_sign * jet_angle) * dir;
        break;
      case ThrusterRole::LeftArm:
        mount += Eigen::Vector3d(forearm, shoulder, 0.0);
        break;
      case ThrusterRole::RightArm:
        mount += Eigen::Vector3d(forearm, -shoulder, 0.0);
        break;
    }
    mounts[k] = mount;
    t.r = mount - model.com;
    t.a = dir.normalized();
    t.t_min = spec.t_min;
    t.t_max = spec.t_max;
    t.omega_n = spec.omega_n;
    t.zeta = spec.zeta;
    t.dr_ds = Eigen::Matrix3Xd::Zero(3, n_joints);
    t.da_ds = Eigen::Matrix3Xd::Zero(3, n_joints);
    model.thrusters.push_back(t);
  }

  for (int j = 0; j < n_joints; ++j) {
    const JointSpec& joint = base.joints[j];
    const int k = joint.thruster_index;
    Eigen::Vector3d pivot = joint.pivot;
    // Shoulder pivots ride outward with the shoulder width, like their thrusters.
    if (base.thrusters[k].role == ThrusterRole::LeftArm) pivot.y() += shoulder;
    if (base.thrusters[k].role == ThrusterRole::RightArm) pivot.y() -= shoulder;
    model.thrusters[k].dr_ds.col(j) = joint.axis.cross(mounts[k] - pivot);
    model.thrusters[k].da_ds.col(j) = joint.axis.cross(model.thrusters[k].a);
  }

  return model;
}

HoverSolution solve_static_hover(const RobotModel& model) {
  const int n = model.num_thrusters();
  Eigen::MatrixXd wrench(6, n);
  for (int k = 0; k < n; ++k) {
    wrench.col(k).head<3>() = model.thrusters[k].a;
    wrench.col(k).tail<3>() = model.thrusters[k].r.cross(model.thrusters[k].a);
  }
  Eigen::VectorXd target = Eigen::VectorXd::Zero(6);
  target[2] = model.mass * kGravity;

  HoverSolution sol;
  const double tol = 1e-6 * std::max(1.0, target.norm());
  sol.thrust = wrench.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(target);
  sol.residual = (wrench * sol.thrust - target).norm();

  auto limits_ok = [&](const Eigen::VectorXd& t) {
    for (int k = 0; k < n; ++k) {
      if (t[k] < model.thrusters[k].t_min - 1e-9 || t[k] > model.thrusters[k].t_max + 1e-9) return false;
    }
    return true;
  };
  sol.within_limits = limits_ok(sol.thrust);

  if (!sol.within_limits || sol.residual > tol) {
    // Bounded least squares through the box-QP solver.
    QpProblem qp;
    qp.hessian = wrench.transpose() * wrench;
    qp.gradient = -wrench.transpose() * target;
    qp.lower.resize(n);
    qp.upper.resize(n);
    for (int k = 0; k < n; ++k) {
      qp.lower[k] = model.thrusters[k].t_min;
      qp.upper[k] = model.thrusters[k].t_max;
    }
    QpSolution boxed = solve_qp(qp);
    const double boxed_residual = (wrench * boxed.solution - target).norm();
    if (boxed.status == QpStatus::Optimal && boxed_residual <= tol) {
      sol.thrust = boxed.solution;
      sol.residual = boxed_residual;
      sol.within_limits = true;
    }
  }
  sol.balanced = sol.residual <= tol;
  return sol;
}

bool feasibility_filter(const RobotModel& model, const BaseRobotSpec& base,
                        const FeasibilityConfig& config) {
  if (model.total_t_max() < config.hover_margin * model.mass * kGravity) return false;
  const Eigen::Vector3d offset = (model.com - base.base_com).cwiseAbs();
  if ((offset.array() > config.com_box.array()).any()) return false;
  const HoverSolution hover = solve_static_hover(model);
  return hover.balanced && hover.within_limits;
}

}  // namespace codesign
