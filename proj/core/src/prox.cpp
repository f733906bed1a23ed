#include "demix/prox.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "demix/error.hpp"
#include "demix/linalg.hpp"

namespace demix::solvers {

std::string_view to_string(GaugeKind kind) {
  switch (kind) {
    case GaugeKind::l1: return "l1";
    case GaugeKind::linf: return "linf";
    case GaugeKind::schatten1: return "schatten1";
    case GaugeKind::operator_norm: return "operator";
  }
  return "unknown";
}

GaugeKind parse_gauge_kind(std::string_view name) {
  if (name == "l1") return GaugeKind::l1;
  if (name == "linf") return GaugeKind::linf;
  if (name == "schatten1") return GaugeKind::schatten1;
  if (name == "operator") return GaugeKind::operator_norm;
  throw DomainError("unknown gauge kind '" + std::string(name) + "'");
}

namespace {

void require_shape(const GaugeSpec& g, const DenseVector& v) {
  if (v.size() != g.dim()) {
    throw DomainError("gauge " + std::string(to_string(g.kind)) + " expects length " +
                      std::to_string(g.dim()) + ", got " + std::to_string(v.size()));
  }
}

// Applies `shrink` to the singular values of the side×side matrix vec'd in v.
DenseVector map_singular_values(const DenseVector& v, std::size_t side,
                                const std::function<void(std::vector<double>&)>& shrink) {
  const SvdResult s = svd(unvec(v, side, side));
  std::vector<double> sigma = s.singular_values;
  shrink(sigma);
  DenseMatrix us = s.u;
  for (std::size_t k = 0; k < sigma.size(); ++k)
    for (double& x : us.col(k)) x *= sigma[k];
  return vec(multiply_by_transpose(us, s.v));
}

}  // namespace

double gauge_value(const GaugeSpec& gauge, const DenseVector& v) {
  require_shape(gauge, v);
  switch (gauge.kind) {
    case GaugeKind::l1: return norm1(v.span());
    case GaugeKind::linf: return norm_inf(v.span());
    case GaugeKind::schatten1: {
      const SvdResult s = svd(unvec(v, gauge.shape, gauge.shape));
      double sum = 0.0;
      for (double x : s.singular_values) sum += x;
      return sum;
    }
    case GaugeKind::operator_norm: {
      if (gauge.shape == 0) return 0.0;
      return svd(unvec(v, gauge.shape, gauge.shape)).singular_values.front();
    }
  }
  return 0.0;
}

DenseVector prox_l1(const DenseVector& v, double t) {
  if (t < 0.0) throw DomainError("prox_l1: t must be nonnegative");
  DenseVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]) - t;
    out[i] = a > 0.0 ? std::copysign(a, v[i]) : 0.0;
  }
  return out;
}

DenseVector project_l1_ball(const DenseVector& v, double alpha) {
  if (alpha < 0.0) throw DomainError("project_l1_ball: alpha must be nonnegative");
  if (norm1(v.span()) <= alpha) return v;
  if (alpha == 0.0) return DenseVector(v.size());
  std::vector<double> mag(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) mag[i] = std::abs(v[i]);
  std::sort(mag.begin(), mag.end(), std::greater<>());
  double cumulative = 0.0;
  double threshold = 0.0;
  for (std::size_t j = 0; j < mag.size(); ++j) {
    cumulative += mag[j];
    const double candidate = (cumulative - alpha) / static_cast<double>(j + 1);
    // norm1 sums in a different order, so near ‖v‖₁ = α the candidate can be −ulp
    if (mag[j] - candidate > 0.0) threshold = std::max(candidate, 0.0);
    else break;
  }
  return prox_l1(v, threshold);
}

DenseVector project_linf_ball(const DenseVector& v, double alpha) {
  if (alpha < 0.0) throw DomainError("project_linf_ball: alpha must be nonnegative");
  DenseVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::clamp(v[i], -alpha, alpha);
  return out;
}

DenseMatrix prox_schatten1(const DenseMatrix& m, double t) {
  if (t < 0.0) throw DomainError("prox_schatten1: t must be nonnegative");
  if (!m.is_square()) throw DomainError("prox_schatten1: expected a square matrix");
  const DenseVector out = map_singular_values(vec(m), m.rows(), [t](std::vector<double>& s) {
    for (double& x : s) x = std::max(x - t, 0.0);
  });
  return unvec(out, m.rows(), m.cols());
}

DenseVector prox_gauge(const GaugeSpec& gauge, const DenseVector& v, double t) {
  require_shape(gauge, v);
  if (t < 0.0) throw DomainError("prox_gauge: t must be nonnegative");
  switch (gauge.kind) {
    case GaugeKind::l1: return prox_l1(v, t);
    case GaugeKind::linf: return v - project_l1_ball(v, t);
    case GaugeKind::schatten1:
      return map_singular_values(v, gauge.shape, [t](std::vector<double>& s) {
        for (double& x : s) x = std::max(x - t, 0.0);
      });
    case GaugeKind::operator_norm:
      return v - project_ball({GaugeKind::schatten1, gauge.shape}, v, t);
  }
  return v;
}

DenseVector project_ball(const GaugeSpec& gauge, const DenseVector& v, double alpha) {
  require_shape(gauge, v);
  if (alpha < 0.0) throw DomainError("project_ball: alpha must be nonnegative");
  switch (gauge.kind) {
    case GaugeKind::l1: return project_l1_ball(v, alpha);
    case GaugeKind::linf: return project_linf_ball(v, alpha);
    case GaugeKind::schatten1:
      return map_singular_values(v, gauge.shape, [alpha](std::vector<double>& s) {
        const DenseVector p = project_l1_ball(DenseVector(s), alpha);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::abs(p[i]);
      });
    case GaugeKind::operator_norm:
      return map_singular_values(v, gauge.shape, [alpha](std::vector<double>& s) {
        for (double& x : s) x = std::min(x, alpha);
      });
  }
  return v;
}

}  // namespace demix::solvers
