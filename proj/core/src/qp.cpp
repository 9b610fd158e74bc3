#include "codesign/qp.hpp"

#include <cmath>

namespace codesign {

const char* to_string(QpStatus status) {
  switch (status) {
    case QpStatus::Optimal: return "optimal";
    case QpStatus::MaxIter: return "max_iter";
    case QpStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

Eigen::VectorXd project(const QpProblem& qp, const Eigen::VectorXd& z) {
  return z.cwiseMax(qp.lower).cwiseMin(qp.upper);
}

// Largest eigenvalue of H by power iteration; Lipschitz constant of the gradient.
double lipschitz_bound(const Eigen::MatrixXd& hessian) {
  const int n = static_cast<int>(hessian.rows());
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
  double lambda = 0.0;
  for (int i = 0; i < 50; ++i) {
    Eigen::VectorXd w = hessian * v;
    const double norm = w.norm();
    if (norm < 1e-300) return 1.0;
    const double next = v.dot(w);
    v = w / norm;
    if (std::abs(next - lambda) <= 1e-10 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::max(lambda, 1e-12);
}

}  // namespace

QpSolution solve_qp(const QpProblem& qp, const std::optional<Eigen::VectorXd>& warm_start,
                    const QpSettings& settings) {
  QpSolution out;
  const int n = qp.size();
  if ((qp.lower.array() > qp.upper.array()).any()) {
    out.status = QpStatus::Infeasible;
    out.solution = Eigen::VectorXd::Zero(n);
    return out;
  }

  // Jacobi preconditioning: z = S zs with S = diag(H)^(-1/2). The box stays a
  // box and the weight-scale disparity drops out of the condition number.
  Eigen::VectorXd scale(n);
  for (int i = 0; i < n; ++i) {
    scale[i] = qp.hessian(i, i) > 1e-12 ? 1.0 / std::sqrt(qp.hessian(i, i)) : 1.0;
  }
  QpProblem sq;
  sq.hessian = scale.asDiagonal() * qp.hessian * scale.asDiagonal();
  sq.gradient = scale.asDiagonal() * qp.gradient;
  sq.lower = qp.lower.cwiseQuotient(scale);
  sq.upper = qp.upper.cwiseQuotient(scale);

  const double step = 1.0 / lipschitz_bound(sq.hessian);
  const double tol = settings.tol * (1.0 + qp.gradient.norm());
  const double tol_scaled = settings.tol * (1.0 + sq.gradient.norm());

  // Convergence requires the projected-gradient residual in both the original
  // and the preconditioned metric; the latter is invariant to the weight scale.
  auto converged = [&](const Eigen::VectorXd& zs) {
    const Eigen::VectorXd z = scale.asDiagonal() * zs;
    const Eigen::VectorXd grad = qp.hessian * z + qp.gradient;
    if ((z - project(qp, z - grad)).norm() >= tol) return false;
    const Eigen::VectorXd grad_s = scale.asDiagonal() * grad;
    return (zs - project(sq, zs - grad_s)).norm() < tol_scaled;
  };

  Eigen::VectorXd zs = warm_start ? project(sq, warm_start->cwiseQuotient(scale))
                                  : project(sq, Eigen::VectorXd::Zero(n));
  Eigen::VectorXd ys = zs;
  double momentum = 1.0;
  double prev_objective = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= settings.max_iter; ++iter) {
    const Eigen::VectorXd grad_y = sq.hessian * ys + sq.gradient;
    const Eigen::VectorXd zs_next = project(sq, ys - step * grad_y);

    const double objective = 0.5 * zs_next.dot(sq.hessian * zs_next) + sq.gradient.dot(zs_next);
    if (objective > prev_objective) {
      // Restart the momentum sequence when acceleration overshoots.
      momentum = 1.0;
      ys = zs;
      prev_objective = std::numeric_limits<double>::infinity();
      continue;
    }
    prev_objective = objective;

    const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    ys = zs_next + ((momentum - 1.0) / momentum_next) * (zs_next - zs);
    zs = zs_next;
    momentum = momentum_next;
    out.iterations = iter;

    if (converged(zs)) {
      out.status = QpStatus::Optimal;
      break;
    }
  }

  out.solution = scale.asDiagonal() * zs;
  out.objective = 0.5 * out.solution.dot(qp.hessian * out.solution) + qp.gradient.dot(out.solution);
  if (out.status != QpStatus::Optimal) out.status = QpStatus::MaxIter;
  return out;
}

bool kkt_satisfied(const QpProblem& qp, const Eigen::VectorXd& z, double tol) {
  const Eigen::VectorXd grad = qp.hessian * z + qp.gradient;
  const double scale = tol * (1.0 + qp.gradient.norm());
  for (int i = 0; i < qp.size(); ++i) {
    const bool at_lower = z[i] <= qp.lower[i] + scale;
    const bool at_upper = z[i] >= qp.upper[i] - scale;
    if (at_lower && grad[i] >= -scale) continue;
    if (at_upper && grad[i] <= scale) continue;
    if (std::abs(grad[i]) <= scale) continue;
    return false;
  }
  return true;
}

}  // namespace codesign
