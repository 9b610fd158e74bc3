#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "codesign/trajectory.hpp"

using namespace codesign;

namespace {

const Eigen::Vector3d kZero = Eigen::Vector3d::Zero();

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("stationary segment is a constant polynomial") {
  const Eigen::Vector3d p(1.0, -2.0, 0.5);
  const QuinticSegment seg = min_jerk_segment(p, p, kZero, kZero, kZero, kZero, 3.0);
  for (double t : {0.0, 0.7, 1.5, 3.0}) {
    CHECK((seg.position(t) - p).norm() < 1e-12);
    CHECK(seg.velocity(t).norm() < 1e-12);
  }
}

TEST_CASE("boundary system is satisfied to machine precision") {
  const Eigen::Vector3d p0(0.0, 1.0, 2.0), p1(3.0, -1.0, 0.0);
  const Eigen::Vector3d v0(0.2, 0.0, -0.1), v1(-0.3, 0.4, 0.0);
  const Eigen::Vector3d a0(0.05, -0.02, 0.0), a1(0.0, 0.1, -0.05);
  const double T = 2.5;
  const QuinticSegment seg = min_jerk_segment(p0, p1, v0, v1, a0, a1, T);

  CHECK((seg.position(0.0) - p0).norm() < 1e-10);
  CHECK((seg.velocity(0.0) - v0).norm() < 1e-10);
  CHECK((seg.acceleration(0.0) - a0).norm() < 1e-10);
  CHECK((seg.position(T) - p1).norm() < 1e-10);
  CHECK((seg.velocity(T) - v1).norm() < 1e-10);
  CHECK((seg.acceleration(T) - a1).norm() < 1e-10);
}

TEST_CASE("rest-to-rest midpoint and peak speed") {
  const Eigen::Vector3d p1(1.0, 0.0, 0.0);
  const QuinticSegment seg = min_jerk_segment(kZero, p1, kZero, kZero, kZero, kZero, 1.0);
  CHECK((seg.position(0.5) - 0.5 * p1).norm() < 1e-12);

  // Peak speed of the rest-to-rest quintic is 15 dp / (8 T) at T/2.
  CHECK(seg.velocity(0.5).x() == doctest::Approx(15.0 / 8.0).epsilon(1e-12));
  double scanned = 0.0;
  for (int i = 0; i <= 1000; ++i) scanned = std::max(scanned, seg.velocity(i / 1000.0).norm());
  CHECK(scanned <= 15.0 / 8.0 + 1e-9);
}

TEST_CASE("degenerate duration is rejected") {
  CHECK_THROWS_AS(min_jerk_segment(kZero, kZero, kZero, kZero, kZero, kZero, 0.0), DegenerateDuration);
  CHECK_THROWS_AS(min_jerk_segment(kZero, kZero, kZero, kZero, kZero, kZero, -1.0), DegenerateDuration);
}

TEST_CASE("single rest-to-rest segment sampling") {
  std::vector<Waypoint> waypoints(2);
  waypoints[0].position = kZero;
  waypoints[1].position = {1.0, 0.0, 0.0};
  const ReferenceTrajectory traj = build_trajectory(waypoints, {2.0}, 0.1);

  CHECK(traj.samples().size() == 21);
  CHECK(traj.duration() == doctest::Approx(2.0));
  double peak = 0.0;
  for (const ReferenceSample& s : traj.samples()) peak = std::max(peak, s.v_ref.norm());
  CHECK(peak == doctest::Approx(15.0 / (8.0 * 2.0)).epsilon(1e-12));
  CHECK(traj.at(1.0).v_ref.x() == doctest::Approx(0.9375).epsilon(1e-12));
  CHECK(traj.samples().front().v_ref.norm() < 1e-12);
  CHECK(traj.samples().back().v_ref.norm() < 1e-12);
}

TEST_CASE("coincident waypoints give a constant trajectory") {
  std::vector<Waypoint> waypoints(2);
  waypoints[0].position = {1.0, 1.0, 1.0};
  waypoints[1].position = {1.0, 1.0, 1.0};
  const ReferenceTrajectory traj = build_trajectory(waypoints, {1.0}, 0.1);
  for (const ReferenceSample& s : traj.samples()) {
    CHECK((s.x_ref - waypoints[0].position).norm() < 1e-12);
    CHECK(s.v_ref.norm() < 1e-12);
  }
}

TEST_CASE("junctions are C2 continuous and hit the waypoints") {
  std::vector<Waypoint> waypoints(3);
  waypoints[0].position = kZero;
  waypoints[0].direction_cue = {1.0, 0.0, 0.0};
  waypoints[0].dwell_speed = 0.0;
  waypoints[1].position = {2.0, 1.0, 0.5};
  waypoints[1].direction_cue = Eigen::Vector3d(1.0, 1.0, 0.0).normalized();
  waypoints[1].dwell_speed = 0.8;
  waypoints[2].position = {3.0, 4.0, 1.0};
  waypoints[2].direction_cue = {0.0, 1.0, 0.0};
  waypoints[2].dwell_speed = 0.0;
  const std::vector<double> durations = {2.3, 3.1};
  const ReferenceTrajectory traj = build_trajectory(waypoints, durations, 0.1);

  // Boundary exactness at each waypoint time.
  CHECK((traj.at(0.0).x_ref - waypoints[0].position).norm() < 1e-9);
  CHECK((traj.at(2.3).x_ref - waypoints[1].position).norm() < 1e-9);
  CHECK((traj.at(5.4).x_ref - waypoints[2].position).norm() < 1e-9);

  // One-sided limits around the junction match through acceleration.
  const double eps = 1e-7;
  const ReferenceSample before = traj.at(2.3 - eps);
  const ReferenceSample after = traj.at(2.3 + eps);
  CHECK((before.x_ref - after.x_ref).norm() < 1e-6);
  CHECK((before.v_ref - after.v_ref).norm() < 1e-6);
  CHECK((traj.at(2.3).v_ref - waypoints[1].dwell_speed * waypoints[1].direction_cue).norm() < 1e-9);
}

TEST_CASE("sampled velocities agree with finite differences of position") {
  std::vector<Waypoint> waypoints(3);
  waypoints[0].position = kZero;
  waypoints[1].position = {1.5, 2.0, 0.3};
  waypoints[1].direction_cue = {0.0, 1.0, 0.0};
  waypoints[1].dwell_speed = 1.0;
  waypoints[2].position = {4.0, 3.0, 0.8};
  const ReferenceTrajectory traj = build_trajectory(waypoints, {3.0, 3.0}, 0.05);

  const double dt = traj.dt();
  const double tol = 10.0 * dt * dt * traj.max_jerk();
  const auto& samples = traj.samples();
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const Eigen::Vector3d fd = (samples[i + 1].x_ref - samples[i - 1].x_ref) / (2.0 * dt);
    CHECK((fd - samples[i].v_ref).norm() < tol);
  }
}

TEST_CASE("csv writes are deterministic and round-trip the samples") {
  std::vector<Waypoint> waypoints(2);
  waypoints[0].position = kZero;
  waypoints[1].position = {1.0, 2.0, 0.5};
  const ReferenceTrajectory traj = build_trajectory(waypoints, {2.0}, 0.1);

  const auto dir = std::filesystem::temp_directory_path();
  const auto path_a = dir / "codesign_traj_a.csv";
  const auto path_b = dir / "codesign_traj_b.csv";
  save_trajectory_csv(traj, path_a.string(), "config_hash=abc seed=1");
  save_trajectory_csv(traj, path_b.string(), "config_hash=abc seed=1");
  CHECK(slurp(path_a) == slurp(path_b));

  std::string prov;
  const ReferenceTrajectory loaded = load_trajectory_csv(path_a.string(), &prov);
  CHECK(prov == "config_hash=abc seed=1");
  REQUIRE(loaded.samples().size() == traj.samples().size());
  for (std::size_t i = 0; i < traj.samples().size(); ++i) {
    CHECK((loaded.samples()[i].x_ref - traj.samples()[i].x_ref).norm() < 1e-12);
    CHECK((loaded.samples()[i].v_ref - traj.samples()[i].v_ref).norm() < 1e-12);
  }
  std::filesystem::remove(path_a);
  std::filesystem::remove(path_b);
}

TEST_CASE("durations snap to the sample grid") {
  std::vector<Waypoint> waypoints(3);
  waypoints[0].position = kZero;
  waypoints[1].position = {1.03, 0.0, 0.0};
  waypoints[2].position = {1.03, 2.51, 0.0};
  const auto durations = durations_from_speed(waypoints, 1.0, 0.1);
  REQUIRE(durations.size() == 2);
  CHECK(durations[0] == doctest::Approx(1.1));
  CHECK(durations[1] == doctest::Approx(2.6));
}
