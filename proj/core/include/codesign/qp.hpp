#pragma once

#include <optional>

#include <Eigen/Dense>

namespace codesign {

/// minimize 1/2 z'Hz + g'z  subject to  lower <= z <= upper
struct QpProblem {
  Eigen::MatrixXd hessian;   // symmetric PSD
  Eigen::VectorXd gradient;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int size() const { return static_cast<int>(gradient.size()); }
};

enum class QpStatus { Optimal, MaxIter, Infeasible };

struct QpSolution {
  Eigen::VectorXd solution;
  double objective = 0.0;
  int iterations = 0;
  QpStatus status = QpStatus::MaxIter;
};

struct QpSettings {
  int max_iter = 2000;
  double tol = 1e-6;  // on the projected gradient, scaled by (1 + |g|)
};

const char* to_string(QpStatus status);

/// Accelerated projected gradient on the box. Projections are exact, so no
/// external solver is needed; MaxIter is reported as a failure status.
QpSolution solve_qp(const QpProblem& qp, const std::optional<Eigen::VectorXd>& warm_start = {},
                    const QpSettings& settings = {});

/// KKT certificate for a box QP: at a solution, each coordinate either sits
/// at a bound with the gradient pushing outward or has near-zero gradient.
bool kkt_satisfied(const QpProblem& qp, const Eigen::VectorXd& z, double tol = 1e-6);

}  // namespace codesign
