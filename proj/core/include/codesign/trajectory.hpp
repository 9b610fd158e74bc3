#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "codesign/errors.hpp"

namespace codesign {

struct Waypoint {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();        // [m]
  Eigen::Vector3d direction_cue = Eigen::Vector3d::UnitX();  // unit; shapes the tangent only
  double dwell_speed = 0.0;                                  // tangential speed at the waypoint [m/s]
};

struct ReferenceSample {
  double t = 0.0;
  Eigen::Vector3d x_ref = Eigen::Vector3d::Zero();
  Eigen::Vector3d v_ref = Eigen::Vector3d::Zero();
  Eigen::Vector3d phi_ref = Eigen::Vector3d::Zero();  // roll-pitch-yaw [rad], constant
};

/// Per-axis quintic p(t) = sum c_i t^i on t in [0, duration].
struct QuinticSegment {
  double duration = 0.0;
  std::array<Eigen::Vector3d, 6> coeffs;  // coeffs[i] multiplies t^i

  Eigen::Vector3d position(double t) const;
  Eigen::Vector3d velocity(double t) const;
  Eigen::Vector3d acceleration(double t) const;
  Eigen::Vector3d jerk(double t) const;
};

/// Unique quintic meeting the six boundary conditions; solved per axis from
/// the 6x6 boundary system. Throws DegenerateDuration for T <= 0.
QuinticSegment min_jerk_segment(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                                const Eigen::Vector3d& v0, const Eigen::Vector3d& v1,
                                const Eigen::Vector3d& a0, const Eigen::Vector3d& a1, double duration);

class ReferenceTrajectory {
 public:
  ReferenceTrajectory() = default;
  ReferenceTrajectory(std::vector<QuinticSegment> segments, double dt,
                      Eigen::Vector3d phi_ref = Eigen::Vector3d::Zero());

  double dt() const { return dt_; }
  double duration() const { return duration_; }
  const Eigen::Vector3d& phi_ref() const { return phi_ref_; }
  const std::vector<ReferenceSample>& samples() const { return samples_; }

  /// Piecewise evaluation at arbitrary time; clamps outside [0, duration].
  ReferenceSample at(double t) const;
  double max_jerk() const;

 private:
  std::vector<QuinticSegment> segments_;
  std::vector<double> segment_starts_;
  double dt_ = 0.1;
  double duration_ = 0.0;
  Eigen::Vector3d phi_ref_ = Eigen::Vector3d::Zero();
  std::vector<ReferenceSample> samples_;
};

/// Chains min-jerk segments through the waypoints. Junction velocity is
/// dwell_speed * direction_cue and junction acceleration is zero, giving a
/// C^2 path.
ReferenceTrajectory build_trajectory(const std::vector<Waypoint>& waypoints,
                                     const std::vector<double>& segment_durations, double dt);

/// Durations from a cruise speed, rounded up to whole dt multiples so gate
/// times land on the sample grid.
std::vector<double> durations_from_speed(const std::vector<Waypoint>& waypoints, double cruise_speed,
                                         double dt);

void save_trajectory_csv(const ReferenceTrajectory& trajectory, const std::string& path,
                         const std::string& provenance = {});
ReferenceTrajectory load_trajectory_csv(const std::string& path, std::string* provenance = nullptr);

}  // namespace codesign
