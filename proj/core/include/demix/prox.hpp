#pragma once

#include <cstddef>
#include <string_view>

#include "demix/dense.hpp"

namespace demix::solvers {

enum class GaugeKind { l1, linf, schatten1, operator_norm };

[[nodiscard]] std::string_view to_string(GaugeKind kind);
/// Parses "l1", "linf", "schatten1", "operator"; throws DomainError otherwise.
[[nodiscard]] GaugeKind parse_gauge_kind(std::string_view name);

/// A gauge together with the shape it acts on. Matrix gauges act on the
/// column-major vec of a side×side matrix.
struct GaugeSpec {
  GaugeKind kind = GaugeKind::l1;
  std::size_t shape = 0;  ///< vector dimension, or matrix side for matrix kinds

  [[nodiscard]] bool is_matrix() const noexcept {
    return kind == GaugeKind::schatten1 || kind == GaugeKind::operator_norm;
  }
  /// Length of the vectorized argument.
  [[nodiscard]] std::size_t dim() const noexcept { return is_matrix() ? shape * shape : shape; }

  friend bool operator==(const GaugeSpec&, const GaugeSpec&) = default;
};

[[nodiscard]] double gauge_value(const GaugeSpec& gauge, const DenseVector& v);

/// Soft threshold sign(vᵢ)·max(|vᵢ| − t, 0).
[[nodiscard]] DenseVector prox_l1(const DenseVector& v, double t);
/// Euclidean projection onto {‖x‖₁ ≤ α} by full sort.
[[nodiscard]] DenseVector project_l1_ball(const DenseVector& v, double alpha);
/// Componentwise clamp to [−α, α].
[[nodiscard]] DenseVector project_linf_ball(const DenseVector& v, double alpha);
/// Singular-value soft thresholding U·max(σ − t, 0)·Vᵀ.
[[nodiscard]] DenseMatrix prox_schatten1(const DenseMatrix& m, double t);

/// prox of t·gauge for all four kinds. The ℓ∞ and operator-norm cases use
/// the Moreau decomposition against the dual-ball projection.
[[nodiscard]] DenseVector prox_gauge(const GaugeSpec& gauge, const DenseVector& v, double t);

/// Euclidean projection onto {gauge(x) ≤ α}.
[[nodiscard]] DenseVector project_ball(const GaugeSpec& gauge, const DenseVector& v,
                                       double alpha);

}  // namespace demix::solvers
