#pragma once

#include <Eigen/Dense>

#include "codesign/robot_model.hpp"

namespace codesign {

/// Static wrench balance at phi = 0, delta_s = 0: find T with
/// sum a_k T_k = m g e3 and sum r_k x a_k T_k = 0.
struct HoverSolution {
  Eigen::VectorXd thrust;     // [N], size n_p
  double residual = 0.0;      // ||W T - b||
  bool within_limits = false;
  bool balanced = false;      // residual below tolerance
};

HoverSolution solve_static_hover(const RobotModel& model);

}  // namespace codesign
