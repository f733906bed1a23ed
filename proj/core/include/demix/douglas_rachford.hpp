#pragma once

#include <cstddef>
#include <optional>

#include "demix/dense.hpp"
#include "demix/prox.hpp"

namespace demix::solvers {

/// Which component of the pair the objective gauge is applied to.
enum class ObjectiveSide { first, second };

/// Constrained demixing program
///
///   minimize f(x)  subject to  g(y) ≤ α  and  x + Q y = z₀
///
/// with f = `objective`, g = `constraint`. With ObjectiveSide::second the
/// roles swap: minimize f(y) subject to g(x) ≤ α. Matrix signals are stored
/// as column-major vecs and Q acts on vec(Y).
struct DemixProblem {
  DenseVector z0;
  DenseMatrix q;
  GaugeSpec objective;
  GaugeSpec constraint;
  double alpha = 0.0;
  ObjectiveSide objective_side = ObjectiveSide::first;
  std::optional<DenseVector> truth_x0;
  std::optional<DenseVector> truth_y0;

  [[nodiscard]] std::size_t dim() const noexcept { return z0.size(); }
  /// Checks shapes, α ≥ 0, and ‖QᵀQ − I‖∞ ≤ 1e-8; throws DomainError.
  void validate() const;
};

struct DrParams {
  double gamma = 1.0;
  double relaxation = 1.0;
  double tol = 1e-8;
  std::size_t max_iter = 50'000;
};

struct SolveReport {
  DenseVector x_star;
  DenseVector y_star;
  std::size_t iterations = 0;
  double residual = 0.0;  ///< last ‖z_{k+1} − z_k‖∞
  bool converged = false;
};

/// Douglas–Rachford splitting on F₁ = objective gauge and F₂ = indicator of
/// {x : g(Qᵀ(z₀ − x)) ≤ α}. The returned pair is always feasible: y⋆ lies in
/// the constraint ball and x⋆ = z₀ − Q y⋆. On non-convergence the last
/// iterate is returned with converged = false.
[[nodiscard]] SolveReport solve_demix(const DemixProblem& problem, const DrParams& params = {});

}  // namespace demix::solvers
