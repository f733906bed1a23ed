#pragma once

// Geometric success test for a generated instance: the program recovers the
// truth iff the descent cone of the objective at x₀ meets −Q times the
// descent cone of the constraint gauge at y₀ only at the origin.

#include "demix/cone_geometry.hpp"
#include "demix/error.hpp"
#include "demix/experiments.hpp"
#include "demix/random_models.hpp"

namespace lemma {

inline demix::cones::PolyhedralCone descent_cone(const demix::solvers::GaugeSpec& g,
                                                 const demix::DenseVector& at) {
  using demix::solvers::GaugeKind;
  if (g.kind == GaugeKind::l1) return demix::cones::l1_descent_cone(demix::models::SparsityPattern::of(at));
  if (g.kind == GaugeKind::linf) return demix::cones::linf_descent_cone(at);
  throw demix::DomainError("descent_cone: only polyhedral gauges are supported");
}

/// True when the geometry predicts exact recovery.
inline bool predicts_success(const demix::experiments::TrialInstance& inst) {
  const auto& p = inst.problem;
  const bool first = p.objective_side == demix::solvers::ObjectiveSide::first;
  // With the objective on y the program is y + Qᵀx = Qᵀz₀, so the roles and Q transpose.
  const auto& obj_at = first ? *p.truth_x0 : *p.truth_y0;
  const auto& con_at = first ? *p.truth_y0 : *p.truth_x0;
  const auto k = descent_cone(p.objective, obj_at);
  const auto k_tilde = descent_cone(p.constraint, con_at);
  demix::DenseMatrix q = first ? p.q : p.q.transposed();
  for (std::size_t j = 0; j < q.cols(); ++j)
    for (double& v : q.col(j)) v = -v;
  return !demix::cones::intersects_nontrivially(k, k_tilde, q);
}

}  // namespace lemma
