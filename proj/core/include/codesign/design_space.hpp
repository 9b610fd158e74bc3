#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "codesign/errors.hpp"
#include "codesign/rng.hpp"

namespace codesign {

inline constexpr int kNumGeometricParams = 8;

/// One row of the sampling grid: closed interval [min, max] discretized at `step`.
struct ParameterRange {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  int level_count() const;
  void validate() const;  // throws InvalidRange
  double snap(double value) const;
};

using RangeSet = std::array<ParameterRange, kNumGeometricParams>;

// Jetpack angle in degrees, every length in millimetres.
struct GeometricParams {
  double jet_angle = 0.0;
  double jet_offset = 0.0;
  double jet_height = 0.0;
  double forearm_len = 0.0;
  double shoulder_width = 0.0;
  double hip_distance = 0.0;
  double ankle_height = 0.0;
  double foot_length = 0.0;

  double operator[](int i) const;
  double& operator[](int i);
  bool operator==(const GeometricParams&) const = default;
};

const std::array<std::string, kNumGeometricParams>& geometric_param_names();

/// The sampling grid used throughout: angle 0..14 deg step 2, jet offsets and
/// limb lengths in mm on 5 mm steps (10 mm for the foot).
RangeSet default_ranges();

/// n-by-dims matrix in [0,1): each column's values occupy the n equal-width
/// strata exactly once (Latin property).
Eigen::MatrixXd latin_hypercube_unit(int n, int dims, Rng& rng);

/// Uniform Latin Hypercube over the stepped grid. Samples are unique after
/// snapping; colliding rows are re-drawn from sub-seeded uniforms.
/// Throws GridExhausted / InvalidRange.
std::vector<GeometricParams> sample_parameter_grid(const RangeSet& ranges, int n,
                                                   std::uint64_t seed);

}  // namespace codesign
