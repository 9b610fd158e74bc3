#include "codesign/trajectory.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace codesign {

namespace {

double poly_eval(const std::array<Eigen::Vector3d, 6>& c, double t, int derivative, int axis) {
  double value = 0.0;
  double tp = 1.0;
  for (int i = derivative; i < 6; ++i) {
    double factor = 1.0;
    for (int d = 0; d < derivative; ++d) factor *= (i - d);
    value += factor * c[i][axis] * tp;
    tp *= t;
  }
  return value;
}

Eigen::Vector3d poly_eval3(const std::array<Eigen::Vector3d, 6>& c, double t, int derivative) {
  return {poly_eval(c, t, derivative, 0), poly_eval(c, t, derivative, 1), poly_eval(c, t, derivative, 2)};
}

std::string format_double(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

}  // namespace

Eigen::Vector3d QuinticSegment::position(double t) const { return poly_eval3(coeffs, t, 0); }
Eigen::Vector3d QuinticSegment::velocity(double t) const { return poly_eval3(coeffs, t, 1); }
Eigen::Vector3d QuinticSegment::acceleration(double t) const { return poly_eval3(coeffs, t, 2); }
Eigen::Vector3d QuinticSegment::jerk(double t) const { return poly_eval3(coeffs, t, 3); }

QuinticSegment min_jerk_segment(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                                const Eigen::Vector3d& v0, const Eigen::Vector3d& v1,
                                const Eigen::Vector3d& a0, const Eigen::Vector3d& a1, double duration) {
  if (!(duration > 0.0)) throw DegenerateDuration("segment duration must be positive");
  const double T = duration;

  Eigen::Matrix<double, 6, 6> boundary;
  boundary.setZero();
  // rows: p(0), v(0), a(0), p(T), v(T), a(T)
  boundary(0, 0) = 1.0;
  boundary(1, 1) = 1.0;
  boundary(2, 2) = 2.0;
  for (int i = 0; i < 6; ++i) {
    boundary(3, i) = std::pow(T, i);
    if (i >= 1) boundary(4, i) = i * std::pow(T, i - 1);
    if (i >= 2) boundary(5, i) = i * (i - 1) * std::pow(T, i - 2);
  }
  const Eigen::FullPivLU<Eigen::Matrix<double, 6, 6>> lu(boundary);

  QuinticSegment segment;
  segment.duration = T;
  for (int axis = 0; axis < 3; ++axis) {
    Eigen::Matrix<double, 6, 1> rhs;
    rhs << p0[axis], v0[axis], a0[axis], p1[axis], v1[axis], a1[axis];
    const Eigen::Matrix<double, 6, 1> c = lu.solve(rhs);
    for (int i = 0; i < 6; ++i) segment.coeffs[i][axis] = c[i];
  }
  return segment;
}

ReferenceTrajectory::ReferenceTrajectory(std::vector<QuinticSegment> segments, double dt,
                                         Eigen::Vector3d phi_ref)
    : segments_(std::move(segments)), dt_(dt), phi_ref_(phi_ref) {
  if (!(dt > 0.0)) throw DegenerateDuration("dt must be positive");
  segment_starts_.resize(segments_.size());
  double t = 0.0;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    segment_starts_[i] = t;
    t += segments_[i].duration;
  }
  duration_ = t;

  const int count = static_cast<int>(std::floor(duration_ / dt_ + 1e-9)) + 1;
  samples_.reserve(count);
  for (int i = 0; i < count; ++i) samples_.push_back(at(i * dt_));
}

ReferenceSample ReferenceTrajectory::at(double t) const {
  ReferenceSample sample;
  sample.t = t;
  sample.phi_ref = phi_ref_;
  if (segments_.empty()) return sample;

  const double clamped = std::clamp(t, 0.0, duration_);
  std::size_t idx = segments_.size() - 1;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (clamped < segment_starts_[i] + segments_[i].duration) {
      idx = i;
      break;
    }
  }
  const double local = clamped - segment_starts_[idx];
  sample.x_ref = segments_[idx].position(local);
  sample.v_ref = t >= 0.0 && t <= duration_ ? segments_[idx].velocity(local) : Eigen::Vector3d::Zero();
  if (t > duration_) sample.v_ref.setZero();  // hold position past the end
  return sample;
}

double ReferenceTrajectory::max_jerk() const {
  double peak = 0.0;
  for (const QuinticSegment& seg : segments_) {
    const int steps = 64;
    for (int i = 0; i <= steps; ++i) {
      peak = std::max(peak, seg.jerk(seg.duration * i / steps).norm());
    }
  }
  return peak;
}

ReferenceTrajectory build_trajectory(const std::vector<Waypoint>& waypoints,
                                     const std::vector<double>& segment_durations, double dt) {
  if (waypoints.size() < 2) throw DegenerateDuration("need at least two waypoints");
  if (segment_durations.size() != waypoints.size() - 1) {
    throw DegenerateDuration("need one duration per segment");
  }
  std::vector<QuinticSegment> segments;
  segments.reserve(segment_durations.size());
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const Waypoint& a = waypoints[i];
    const Waypoint& b = waypoints[i + 1];
    segments.push_back(min_jerk_segment(a.position, b.position,
                                        a.dwell_speed * a.direction_cue.normalized(),
                                        b.dwell_speed * b.direction_cue.normalized(),
                                        Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(),
                                        segment_durations[i]));
  }
  return ReferenceTrajectory(std::move(segments), dt);
}

std::vector<double> durations_from_speed(const std::vector<Waypoint>& waypoints, double cruise_speed,
                                         double dt) {
  if (!(cruise_speed > 0.0)) throw DegenerateDuration("cruise speed must be positive");
  std::vector<double> durations;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const double dist = (waypoints[i + 1].position - waypoints[i].position).norm();
    double duration = std::max(dist / cruise_speed, dt);
    duration = std::ceil(duration / dt - 1e-9) * dt;
    durations.push_back(duration);
  }
  return durations;
}

void save_trajectory_csv(const ReferenceTrajectory& trajectory, const std::string& path,
                         const std::string& provenance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  if (!provenance.empty()) out << "# " << provenance << "\n";
  out << "t,x,y,z,vx,vy,vz\n";
  for (const ReferenceSample& s : trajectory.samples()) {
    out << format_double(s.t);
    for (int i = 0; i < 3; ++i) out << ',' << format_double(s.x_ref[i]);
    for (int i = 0; i < 3; ++i) out << ',' << format_double(s.v_ref[i]);
    out << '\n';
  }
}

namespace {

// A loaded trajectory only carries samples; rebuild an evaluable form by
// fitting one quintic per dt-interval is unnecessary, so loading produces a
// sampled trajectory backed by linear interpolation between samples.
class SampledSegmentBuilder {
 public:
  static ReferenceTrajectory from_samples(std::vector<ReferenceSample> samples, double dt) {
    std::vector<QuinticSegment> segments;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      segments.push_back(min_jerk_segment(samples[i].x_ref, samples[i + 1].x_ref, samples[i].v_ref,
                                          samples[i + 1].v_ref, Eigen::Vector3d::Zero(),
                                          Eigen::Vector3d::Zero(), dt));
    }
    if (segments.empty()) throw MalformedFile("trajectory", 1, "no samples");
    return ReferenceTrajectory(std::move(segments), dt);
  }
};

}  // namespace

ReferenceTrajectory load_trajectory_csv(const std::string& path, std::string* provenance) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::string line;
  std::vector<ReferenceSample> samples;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (provenance) *provenance = line.substr(2);
      continue;
    }
    if (line.rfind("t,", 0) == 0) continue;  // header
    std::stringstream ss(line);
    std::string field;
    std::vector<double> values;
    while (std::getline(ss, field, ',')) {
      double v = 0.0;
      auto res = std::from_chars(field.data(), field.data() + field.size(), v);
      if (res.ec != std::errc()) throw MalformedFile(path, line_no, "bad number '" + field + "'");
      values.push_back(v);
    }
    if (values.size() != 7) throw MalformedFile(path, line_no, "expected 7 columns");
    ReferenceSample s;
    s.t = values[0];
    s.x_ref = {values[1], values[2], values[3]};
    s.v_ref = {values[4], values[5], values[6]};
    samples.push_back(s);
  }
  if (samples.size() < 2) throw MalformedFile(path, line_no, "trajectory needs at least two samples");
  const double dt = samples[1].t - samples[0].t;
  return SampledSegmentBuilder::from_samples(std::move(samples), dt);
}

}  // namespace codesign
