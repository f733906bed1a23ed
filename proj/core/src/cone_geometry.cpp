#include "demix/cone_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "demix/error.hpp"
#include "demix/linalg.hpp"
#include "demix/parallel.hpp"
#include "demix/simplex.hpp"

namespace demix::cones {

namespace {

double row_norm(const DenseMatrix& a, std::size_t j) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.cols(); ++c) s += a(j, c) * a(j, c);
  return std::sqrt(s);
}

double row_dot(const DenseMatrix& a, std::size_t j, const DenseVector& v) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.cols(); ++c) s += a(j, c) * v[c];
  return s;
}

void require_dim(const PolyhedralCone& k, const DenseVector& v, const char* where) {
  if (v.size() != k.dim) {
    throw DomainError(std::string(where) + ": vector length " + std::to_string(v.size()) +
                      " does not match cone dimension " + std::to_string(k.dim));
  }
}

// Splits [0, count) into fixed chunks so per-chunk accumulators can be summed
// in a fixed order regardless of scheduling.
constexpr std::size_t kChunk = 256;

}  // namespace

bool PolyhedralCone::contains(const DenseVector& v, double tol) const {
  require_dim(*this, v, "PolyhedralCone::contains");
  const double scale = std::max(1.0, norm2(v.span()));
  for (std::size_t j = 0; j < constraints.rows(); ++j) {
    if (row_dot(constraints, j, v) > tol * row_norm(constraints, j) * scale) return false;
  }
  return true;
}

PolyhedralCone PolyhedralCone::rotated(const DenseMatrix& u) const {
  if (!u.is_square() || u.rows() != dim) throw DomainError("PolyhedralCone::rotated: shape");
  PolyhedralCone out{dim, multiply_by_transpose(constraints, u), label};
  if (constraints.rows() == 0) out.constraints = DenseMatrix(0, dim);
  return out;
}

void PolyhedralCone::validate() const {
  if (constraints.cols() != dim && constraints.rows() > 0)
    throw DomainError("PolyhedralCone: constraint matrix has wrong column count");
  if (!all_finite(constraints.span())) throw DomainError("PolyhedralCone: non-finite row");
}

PolyhedralCone PolyhedralCone::full_space(std::size_t d) {
  return {d, DenseMatrix(0, d), "full"};
}

IntrinsicVolumeProfile::IntrinsicVolumeProfile(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("IntrinsicVolumeProfile: need at least v_{-1}");
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw DomainError("IntrinsicVolumeProfile: values must be finite and nonnegative");
  }
}

double IntrinsicVolumeProfile::at(long i) const noexcept {
  const long idx = i + 1;
  if (idx < 0 || idx >= static_cast<long>(values_.size())) return 0.0;
  return values_[static_cast<std::size_t>(idx)];
}

double IntrinsicVolumeProfile::total() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

double IntrinsicVolumeProfile::even_sum() const noexcept {
  double s = 0.0;
  for (std::size_t idx = 1; idx < values_.size(); idx += 2) s += values_[idx];  // i = idx − 1
  return s;
}

double IntrinsicVolumeProfile::odd_sum() const noexcept {
  double s = 0.0;
  for (std::size_t idx = 0; idx < values_.size(); idx += 2) s += values_[idx];
  return s;
}

long IntrinsicVolumeProfile::subspace_dimension(double tol) const noexcept {
  long found = -1;
  for (std::size_t idx = 0; idx < values_.size(); ++idx) {
    if (std::abs(values_[idx] - 1.0) <= tol) {
      found = static_cast<long>(idx);
    } else if (values_[idx] > tol) {
      return -1;
    }
  }
  return found;  // index i + 1 = n
}

PolyhedralCone l1_descent_cone(const models::SparsityPattern& pattern) {
  pattern.validate();
  const std::size_t d = pattern.dim;
  const std::size_t free = d - pattern.nnz();
  if (free > 20) {
    throw DomainError("l1_descent_cone: complement size " + std::to_string(free) +
                      " exceeds 20 (2^" + std::to_string(free) + " halfspaces)");
  }
  std::vector<std::size_t> off;
  off.reserve(free);
  {
    std::size_t s = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (s < pattern.nnz() && pattern.support[s] == i) {
        ++s;
      } else {
        off.push_back(i);
      }
    }
  }
  const std::size_t m = std::size_t{1} << free;
  DenseMatrix a(m, d);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t s = 0; s < pattern.nnz(); ++s) a(r, pattern.support[s]) = pattern.signs[s];
    for (std::size_t b = 0; b < free; ++b) a(r, off[b]) = ((r >> b) & 1U) ? -1.0 : 1.0;
  }
  return {d, std::move(a), "l1:" + std::to_string(pattern.nnz())};
}

PolyhedralCone orthant_cone(std::size_t d) {
  DenseMatrix a(d, d);
  for (std::size_t i = 0; i < d; ++i) a(i, i) = -1.0;
  return {d, std::move(a), "orthant"};
}

PolyhedralCone linf_descent_cone(const DenseVector& m0) {
  const std::size_t d = m0.size();
  DenseMatrix a(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (m0[i] != 1.0 && m0[i] != -1.0)
      throw DomainError("linf_descent_cone: entries must be +1 or -1");
    a(i, i) = m0[i];
  }
  return {d, std::move(a), "linf"};
}

DenseVector project_cone(const PolyhedralCone& k, const DenseVector& omega) {
  require_dim(k, omega, "project_cone");
  if (!all_finite(omega.span())) throw DomainError("project_cone: non-finite input");
  if (k.halfspaces() == 0) return omega;

  const DenseMatrix at = k.constraints.transposed();
  const NnlsResult fit = nnls(at, omega);
  if (!fit.converged) throw NumericalError("project_cone: NNLS hit its iteration cap");
  DenseVector p = omega - multiply(at, fit.x.span());

  const double scale = std::max(1.0, norm2(omega.span()));
  for (std::size_t j = 0; j < k.halfspaces(); ++j) {
    if (row_dot(k.constraints, j, p) > 1e-8 * row_norm(k.constraints, j) * scale)
      throw NumericalError("project_cone: result violates a cone constraint");
  }
  const DenseVector residual = omega - p;
  if (dot(residual.span(), p.span()) > 1e-8 * scale * scale)
    throw NumericalError("project_cone: residual is not orthogonal to the projection");
  return p;
}

std::size_t face_dimension(const PolyhedralCone& k, const DenseVector& p, double tol) {
  require_dim(k, p, "face_dimension");
  const double scale = std::max(1.0, norm2(p.span()));
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < k.halfspaces(); ++j) {
    const double v = row_dot(k.constraints, j, p);
    const double slack = tol * row_norm(k.constraints, j) * scale;
    if (v > slack) throw DomainError("face_dimension: point lies outside the cone");
    if (std::abs(v) <= slack) active.push_back(j);
  }
  if (active.empty()) return k.dim;
  DenseMatrix rows(active.size(), k.dim);
  for (std::size_t r = 0; r < active.size(); ++r)
    for (std::size_t c = 0; c < k.dim; ++c) rows(r, c) = k.constraints(active[r], c);
  return k.dim - matrix_rank(rows, 1e-8);
}

IntrinsicVolumeProfile mc_intrinsic_volumes(const PolyhedralCone& k, std::size_t samples,
                                            const RngState& rng, std::size_t threads) {
  k.validate();
  if (samples == 0) throw DomainError("mc_intrinsic_volumes: samples must be positive");
  const std::size_t d = k.dim;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::vector<std::size_t>> counts(chunks, std::vector<std::size_t>(d + 1, 0));
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t end = std::min(samples, (c + 1) * kChunk);
    for (std::size_t j = c * kChunk; j < end; ++j) {
      RngState local = rng.child(j);
      DenseVector omega(d);
      for (double& x : omega) x = local.normal();
      const std::size_t dim = face_dimension(k, project_cone(k, omega));
      ++counts[c][dim];  // face dimension i + 1 sits at index i + 1
    }
  });
  std::vector<std::size_t> total(d + 1, 0);
  for (const auto& chunk : counts)
    for (std::size_t i = 0; i <= d; ++i) total[i] += chunk[i];
  std::vector<double> values(d + 1);
  for (std::size_t i = 0; i <= d; ++i)
    values[i] = static_cast<double>(total[i]) / static_cast<double>(samples);
  return IntrinsicVolumeProfile(std::move(values));
}

IntrinsicVolumeProfile exact_orthant_volumes(std::size_t d) {
  if (d == 0) throw DomainError("exact_orthant_volumes: d must be at least 1");
  // C(d, j)·2^{−d} built multiplicatively; exact in binary for d ≤ 50.
  std::vector<double> values(d + 1);
  double binom = 1.0;
  const double scale = std::ldexp(1.0, -static_cast<int>(d));
  for (std::size_t j = 0; j <= d; ++j) {
    values[j] = binom * scale;
    binom = binom * static_cast<double>(d - j) / static_cast<double>(j + 1);
  }
  return IntrinsicVolumeProfile(std::move(values));
}

IntrinsicVolumeProfile exact_subspace_volumes(std::size_t d, std::size_t n) {
  if (n > d) throw DomainError("exact_subspace_volumes: n must not exceed d");
  std::vector<double> values(d + 1, 0.0);
  values[n] = 1.0;
  return IntrinsicVolumeProfile(std::move(values));
}

double subspace_intersection_probability(std::size_t d, std::size_t n1, std::size_t n2) {
  if (n1 > d || n2 > d) throw DomainError("subspace_intersection_probability: n exceeds d");
  return n1 + n2 > d ? 1.0 : 0.0;
}

double kinematic_probability(const IntrinsicVolumeProfile& vk,
                             const IntrinsicVolumeProfile& vk_tilde) {
  const std::size_t d = vk.dim();
  if (vk_tilde.dim() != d || d == 0)
    throw DomainError("kinematic_probability: profiles must share a positive dimension");
  const long n1 = vk.subspace_dimension();
  const long n2 = vk_tilde.subspace_dimension();
  if (n1 >= 0 && n2 >= 0) {
    return subspace_intersection_probability(d, static_cast<std::size_t>(n1),
                                             static_cast<std::size_t>(n2));
  }
  const long D = static_cast<long>(d);
  double p = 0.0;
  for (long k = 0; k < D; k += 2) {  // (1 + (−1)^k) vanishes for odd k
    double inner = 0.0;
    for (long i = k; i < D; ++i) inner += vk.at(i) * vk_tilde.at(D - 1 - i + k);
    p += 2.0 * inner;
  }
  if (p < -1e-12 || p > 1.0 + 1e-12)
    throw NumericalError("kinematic_probability: result outside [0, 1]");
  return std::clamp(p, 0.0, 1.0);
}

bool intersects_nontrivially(const PolyhedralCone& k, const PolyhedralCone& k_tilde,
                             const DenseMatrix& q) {
  k.validate();
  k_tilde.validate();
  const std::size_t d = k.dim;
  if (k_tilde.dim != d || !q.is_square() || q.rows() != d)
    throw DomainError("intersects_nontrivially: dimension mismatch");
  if (orthogonality_defect(q) > 1e-8) throw DomainError("intersects_nontrivially: Q not orthogonal");

  // Dual of  max cᵀv  s.t.  G v ≤ h  with G = [A_K; A_K̃ Qᵀ; I; −I], h = [0; 0; 1; 1]:
  //   min hᵀy  s.t.  Gᵀy = c,  y ≥ 0.
  const std::size_t m1 = k.halfspaces();
  const std::size_t m2 = k_tilde.halfspaces();
  const std::size_t cols = m1 + m2 + 2 * d;
  solvers::LinearProgram lp;
  lp.sense = solvers::Sense::minimize;
  lp.objective = DenseVector(cols);
  for (std::size_t j = m1 + m2; j < cols; ++j) lp.objective[j] = 1.0;
  lp.constraints = DenseMatrix(d, cols);
  for (std::size_t j = 0; j < m1; ++j)
    for (std::size_t i = 0; i < d; ++i) lp.constraints(i, j) = k.constraints(j, i);
  if (m2 > 0) {
    const DenseMatrix rotated = multiply_by_transpose(q, k_tilde.constraints);  // Q A_K̃ᵀ
    for (std::size_t j = 0; j < m2; ++j)
      for (std::size_t i = 0; i < d; ++i) lp.constraints(i, m1 + j) = rotated(i, j);
  }
  for (std::size_t i = 0; i < d; ++i) {
    lp.constraints(i, m1 + m2 + i) = 1.0;
    lp.constraints(i, m1 + m2 + d + i) = -1.0;
  }
  lp.relations.assign(d, solvers::Relation::equal);

  for (std::size_t i = 0; i < d; ++i) {
    for (double sign : {1.0, -1.0}) {
      lp.rhs = DenseVector(d);
      lp.rhs[i] = sign;
      const solvers::LpSolution sol = solvers::simplex_lp(lp);
      if (sol.status != solvers::LpStatus::optimal) {
        throw NumericalError("intersects_nontrivially: LP returned " +
                             std::string(solvers::to_string(sol.status)));
      }
      if (sol.objective > 1e-7) return true;
    }
  }
  return false;
}

GaussianWidth estimate_gaussian_width(const PolyhedralCone& k, std::size_t samples,
                                      const RngState& rng, std::size_t threads) {
  k.validate();
  if (samples == 0) throw DomainError("estimate_gaussian_width: samples must be positive");
  std::vector<double> norms(samples);
  parallel_for((samples + kChunk - 1) / kChunk, threads, [&](std::size_t c) {
    const std::size_t end = std::min(samples, (c + 1) * kChunk);
    for (std::size_t j = c * kChunk; j < end; ++j) {
      RngState local = rng.child(j);
      DenseVector omega(k.dim);
      for (double& x : omega) x = local.normal();
      norms[j] = norm2(project_cone(k, omega).span());
    }
  });
  const double n = static_cast<double>(samples);
  double sum = 0.0, sum_sq = 0.0;
  for (double r : norms) {
    sum += r;
    sum_sq += r * r;
  }
  GaussianWidth out;
  out.width = sum / n;
  out.mean_square = sum_sq / n;
  if (samples > 1) {
    double var = 0.0;
    for (double r : norms) var += (r - out.width) * (r - out.width);
    var /= n - 1.0;
    out.std_error = std::sqrt(var / n);
  }
  return out;
}

}  // namespace demix::cones
