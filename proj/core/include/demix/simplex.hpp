#pragma once

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

#include "demix/dense.hpp"

namespace demix::solvers {

enum class Relation { less_equal, equal, greater_equal };
enum class Sense { minimize, maximize };

struct VariableBounds {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
};

/// Dense linear program
///   minimize / maximize  cᵀx
///   subject to           A x (≤ | = | ≥) b,   lower ≤ x ≤ upper.
/// Empty `relations` means every row is ≤; empty `bounds` means x ≥ 0.
struct LinearProgram {
  Sense sense = Sense::minimize;
  DenseVector objective;
  DenseMatrix constraints;
  DenseVector rhs;
  std::vector<Relation> relations;
  std::vector<VariableBounds> bounds;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

[[nodiscard]] std::string_view to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  DenseVector x;
  double objective = 0.0;
  std::size_t iterations = 0;
};

/// Two-phase dense tableau simplex with Bland's anti-cycling rule. At an
/// optimal return the basis is primal feasible to 1e-9 and every reduced
/// cost is ≥ −1e-9. Throws DomainError on inconsistent shapes.
[[nodiscard]] LpSolution simplex_lp(const LinearProgram& lp);

}  // namespace demix::solvers
