#include "demix/douglas_rachford.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "demix/error.hpp"

namespace demix::solvers {

void DemixProblem::validate() const {
  const std::size_t d = z0.size();
  if (!q.is_square() || q.rows() != d) {
    throw DomainError("DemixProblem: Q must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  if (objective.dim() != d || constraint.dim() != d)
    throw DomainError("DemixProblem: gauge shapes do not match the observation length");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw DomainError("DemixProblem: alpha must be finite and nonnegative");
  if (!all_finite(z0.span())) throw DomainError("DemixProblem: observation is not finite");
  if (orthogonality_defect(q) > 1e-8) throw DomainError("DemixProblem: Q is not orthogonal");
}

namespace {

// Core loop for the objective-on-x form.
SolveReport douglas_rachford(const DenseVector& z0, const DenseMatrix& q, const GaugeSpec& f,
                             const GaugeSpec& g, double alpha, const DrParams& params) {
  const std::size_t d = z0.size();
  DenseVector z(d);
  DenseVector feasible(d);  // prox of the constraint indicator
  DenseVector p;            // matching constraint-ball point
  SolveReport report;

  auto project_feasible = [&](const DenseVector& w) {
    const DenseVector u = multiply_transposed(q, (z0 - w).span());
    p = project_ball(g, u, alpha);
    return z0 - multiply(q, p.span());
  };

  for (std::size_t k = 0; k < params.max_iter; ++k) {
    feasible = project_feasible(z);
    DenseVector reflected = 2.0 * feasible;
    reflected -= z;
    const DenseVector x = prox_gauge(f, reflected, params.gamma);
    double change = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double step = params.relaxation * (x[i] - feasible[i]);
      z[i] += step;
      change = std::max(change, std::abs(step));
    }
    report.iterations = k + 1;
    report.residual = change;
    if (change < params.tol) {
      report.converged = true;
      break;
    }
  }
  (void)project_feasible(z);
  report.y_star = std::move(p);
  report.x_star = z0 - multiply(q, report.y_star.span());
  return report;
}

}  // namespace

SolveReport solve_demix(const DemixProblem& problem, const DrParams& params) {
  problem.validate();
  if (!(params.gamma > 0.0)) throw DomainError("solve_demix: gamma must be positive");
  if (!(params.relaxation > 0.0 && params.relaxation < 2.0))
    throw DomainError("solve_demix: relaxation must lie in (0, 2)");

  if (problem.objective_side == ObjectiveSide::first) {
    return douglas_rachford(problem.z0, problem.q, problem.objective, problem.constraint,
                            problem.alpha, params);
  }
  // min f(y) s.t. g(x) ≤ α, x + Q y = z0  ⇔  y + Qᵀ x = Qᵀ z0 with the roles of x and y exchanged.
  const DenseMatrix qt = problem.q.transposed();
  const DenseVector z0t = multiply(qt, problem.z0.span());
  SolveReport inner =
      douglas_rachford(z0t, qt, problem.objective, problem.constraint, problem.alpha, params);
  SolveReport out;
  out.x_star = std::move(inner.y_star);
  out.y_star = std::move(inner.x_star);
  out.iterations = inner.iterations;
  out.residual = inner.residual;
  out.converged = inner.converged;
  return out;
}

}  // namespace demix::solvers
