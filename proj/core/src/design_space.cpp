#include "codesign/design_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace codesign {

int ParameterRange::level_count() const {
  if (max == min) return 1;
  return static_cast<int>(std::llround((max - min) / step)) + 1;
}

void ParameterRange::validate() const {
  if (!(min <= max)) throw InvalidRange(name + ": min > max");
  if (!(step > 0.0)) throw InvalidRange(name + ": step must be positive");
  const double span = max - min;
  const double levels = span / step;
  if (std::abs(levels - std::round(levels)) > 1e-9 * std::max(1.0, levels)) {
    throw InvalidRange(name + ": span is not an integer multiple of step");
  }
}

double ParameterRange::snap(double value) const {
  if (max == min) return min;
  const int levels = level_count();
  int k = static_cast<int>(std::llround((value - min) / step));
  k = std::clamp(k, 0, levels - 1);
  return min + k * step;
}

double GeometricParams::operator[](int i) const {
  return const_cast<GeometricParams&>(*this)[i];
}

double& GeometricParams::operator[](int i) {
  switch (i) {
    case 0: return jet_angle;
    case 1: return jet_offset;
    case 2: return jet_height;
    case 3: return forearm_len;
    case 4: return shoulder_width;
    case 5: return hip_distance;
    case 6: return ankle_height;
    case 7: return foot_length;
    default: throw IdOutOfRange("geometric parameter index " + std::to_string(i));
  }
}

const std::array<std::string, kNumGeometricParams>& geometric_param_names() {
  static const std::array<std::string, kNumGeometricParams> names = {
      "jet_angle",      "jet_offset",   "jet_height",   "forearm_len",
      "shoulder_width", "hip_distance", "ankle_height", "foot_length"};
  return names;
}

RangeSet default_ranges() {
  return RangeSet{{
      {"jet_angle", 0.0, 14.0, 2.0},
      {"jet_offset", 0.0, 30.0, 5.0},
      {"jet_height", 0.0, 30.0, 5.0},
      {"forearm_len", 0.0, 40.0, 5.0},
      {"shoulder_width", 0.0, 50.0, 5.0},
      {"hip_distance", 0.0, 50.0, 5.0},
      {"ankle_height", 0.0, 50.0, 5.0},
      {"foot_length", 0.0, 100.0, 10.0},
  }};
}

Eigen::MatrixXd latin_hypercube_unit(int n, int dims, Rng& rng) {
  Eigen::MatrixXd out(n, dims);
  std::vector<int> strata(n);
  for (int d = 0; d < dims; ++d) {
    std::iota(strata.begin(), strata.end(), 0);
    rng.shuffle(strata);
    for (int i = 0; i < n; ++i) {
      out(i, d) = (strata[i] + rng.uniform()) / n;
    }
  }
  return out;
}

namespace {

GeometricParams snap_row(const RangeSet& ranges, const Eigen::VectorXd& unit_row) {
  GeometricParams p;
  for (int d = 0; d < kNumGeometricParams; ++d) {
    const ParameterRange& r = ranges[d];
    p[d] = r.snap(r.min + unit_row[d] * (r.max - r.min));
  }
  return p;
}

struct ParamsLess {
  bool operator()(const GeometricParams& a, const GeometricParams& b) const {
    for (int d = 0; d < kNumGeometricParams; ++d) {
      if (a[d] != b[d]) return a[d] < b[d];
    }
    return false;
  }
};

}  // namespace

std::vector<GeometricParams> sample_parameter_grid(const RangeSet& ranges, int n,
                                                   std::uint64_t seed) {
  if (n < 1) throw InvalidRange("sample count must be >= 1");
  double cardinality = 1.0;
  for (const ParameterRange& r : ranges) {
    r.validate();
    cardinality *= r.level_count();
  }
  if (cardinality < static_cast<double>(n)) {
    throw GridExhausted("grid holds " + std::to_string(static_cast<long long>(cardinality)) +
                        " points, " + std::to_string(n) + " requested");
  }

  Rng rng(derive_seed(seed, "ulh"));
  const Eigen::MatrixXd unit = latin_hypercube_unit(n, kNumGeometricParams, rng);

  std::vector<GeometricParams> samples(n);
  std::set<GeometricParams, ParamsLess> seen;
  std::vector<int> colliding;
  for (int i = 0; i < n; ++i) {
    samples[i] = snap_row(ranges, unit.row(i));
    if (!seen.insert(samples[i]).second) colliding.push_back(i);
  }

  // Snapping a coarse grid collides; re-draw offending rows uniformly on the
  // grid from a fresh sub-seed until the set is unique.
  const long max_attempts = 100L * n;
  long attempts = 0;
  std::uint64_t redraw_counter = 0;
  while (!colliding.empty()) {
    const int row = colliding.back();
    if (++attempts > max_attempts) {
      throw GridExhausted("could not reach " + std::to_string(n) +
                          " unique samples after " + std::to_string(attempts - 1) + " re-draws");
    }
    Rng sub(derive_seed(seed, "ulh-redraw", redraw_counter++));
    GeometricParams candidate;
    for (int d = 0; d < kNumGeometricParams; ++d) {
      const ParameterRange& r = ranges[d];
      candidate[d] = r.min + r.step * static_cast<double>(sub.uniform_int(r.level_count()));
    }
    if (seen.insert(candidate).second) {
      samples[row] = candidate;
      colliding.pop_back();
    }
  }
  return samples;
}

}  // namespace codesign
