#include "demix/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "demix/error.hpp"

namespace demix {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxJacobiSweeps = 80;

// Rotates columns p and q of an n-row column-major block by (c, s).
inline void rotate_columns(double* p, double* q, std::size_t n, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double a = p[i];
    const double b = q[i];
    p[i] = c * a - s * b;
    q[i] = s * a + c * b;
  }
}

// Completes columns [filled, cols) of `u` so that all columns are orthonormal.
void complete_orthonormal(DenseMatrix& u, std::size_t filled) {
  const std::size_t m = u.rows();
  std::size_t candidate = 0;
  for (std::size_t j = filled; j < u.cols(); ++j) {
    while (candidate < m) {
      std::vector<double> e(m, 0.0);
      e[candidate++] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < j; ++k) {
          const double proj = dot(u.col(k), e);
          const double* uk = u.col(k).data();
          for (std::size_t i = 0; i < m; ++i) e[i] -= proj * uk[i];
        }
      }
      const double nrm = norm2(e);
      if (nrm > 1e-6) {
        double* uj = u.col(j).data();
        for (std::size_t i = 0; i < m; ++i) uj[i] = e[i] / nrm;
        break;
      }
    }
  }
}

SvdResult svd_tall(const DenseMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t n = m.cols();
  DenseMatrix a = m;
  DenseMatrix v = DenseMatrix::identity(n);

  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double* ap = a.col(p).data();
        double* aq = a.col(q).data();
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += ap[i] * ap[i];
          beta += aq[i] * aq[i];
          gamma += ap[i] * aq[i];
        }
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate_columns(ap, aq, rows, c, s);
        rotate_columns(v.col(p).data(), v.col(q).data(), n, c, s);
        rotated = true;
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(a.col(j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  SvdResult out{DenseMatrix(rows, n), std::vector<double>(n), DenseMatrix(n, n)};
  std::size_t nonzero = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.singular_values[k] = sigma[j];
    std::copy_n(v.col(j).data(), n, out.v.col(k).data());
    if (sigma[j] > std::numeric_limits<double>::min()) {
      const double* aj = a.col(j).data();
      double* uk = out.u.col(k).data();
      for (std::size_t i = 0; i < rows; ++i) uk[i] = aj[i] / sigma[j];
      nonzero = k + 1;
    } else {
      out.singular_values[k] = 0.0;
    }
  }
  complete_orthonormal(out.u, nonzero);
  return out;
}

}  // namespace

QrResult qr_decompose(const DenseMatrix& m) {
  if (!m.is_square()) {
    throw DomainError("qr_decompose: expected a square matrix, got " + std::to_string(m.rows()) +
                      "x" + std::to_string(m.cols()));
  }
  if (!all_finite(m.span())) throw DomainError("qr_decompose: non-finite entry");

  const std::size_t n = m.rows();
  DenseMatrix r = m;
  DenseMatrix q = DenseMatrix::identity(n);
  std::vector<double> h(n);

  for (std::size_t k = 0; k + 1 < n; ++k) {
    double nrm = 0.0;
    for (std::size_t i = k; i < n; ++i) nrm = std::hypot(nrm, r(i, k));
    if (nrm == 0.0) continue;
    const double alpha = r(k, k) > 0.0 ? -nrm : nrm;
    for (std::size_t i = k; i < n; ++i) h[i] = r(i, k);
    h[k] -= alpha;
    double hn2 = 0.0;
    for (std::size_t i = k; i < n; ++i) hn2 += h[i] * h[i];
    if (hn2 == 0.0) continue;

    // R ← (I − 2hhᵀ/hᵀh) R
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += h[i] * r(i, j);
      s *= 2.0 / hn2;
      for (std::size_t i = k; i < n; ++i) r(i, j) -= s * h[i];
    }
    // Q ← Q (I − 2hhᵀ/hᵀh)
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t l = k; l < n; ++l) s += q(i, l) * h[l];
      s *= 2.0 / hn2;
      for (std::size_t l = k; l < n; ++l) q(i, l) -= s * h[l];
    }
    for (std::size_t i = k + 1; i < n; ++i) r(i, k) = 0.0;
  }
  return {std::move(q), std::move(r)};
}

DenseMatrix SvdResult::reconstruct() const {
  DenseMatrix us = u;
  for (std::size_t k = 0; k < singular_values.size(); ++k) {
    for (double& x : us.col(k)) x *= singular_values[k];
  }
  return multiply_by_transpose(us, v);
}

SvdResult svd(const DenseMatrix& m) {
  if (!all_finite(m.span())) throw DomainError("svd: non-finite entry");
  if (m.rows() >= m.cols()) return svd_tall(m);
  SvdResult t = svd_tall(m.transposed());
  return {std::move(t.v), std::move(t.singular_values), std::move(t.u)};
}

std::size_t matrix_rank(const DenseMatrix& m, double rel_cutoff) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const SvdResult s = svd(m);
  if (s.singular_values.empty() || s.singular_values.front() == 0.0) return 0;
  const double cut = rel_cutoff * s.singular_values.front();
  return static_cast<std::size_t>(std::count_if(s.singular_values.begin(),
                                                s.singular_values.end(),
                                                [cut](double x) { return x > cut; }));
}

DenseVector least_squares(const DenseMatrix& a, const DenseVector& b, double rel_cutoff) {
  if (a.rows() != b.size()) throw DomainError("least_squares: row count mismatch");
  DenseVector x(a.cols());
  if (a.cols() == 0) return x;
  const SvdResult s = svd(a);
  const double cut = rel_cutoff * (s.singular_values.empty() ? 0.0 : s.singular_values.front());
  for (std::size_t k = 0; k < s.singular_values.size(); ++k) {
    const double sk = s.singular_values[k];
    if (sk <= cut || sk == 0.0) break;
    const double coef = dot(s.u.col(k), b.span()) / sk;
    const double* vk = s.v.col(k).data();
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += coef * vk[i];
  }
  return x;
}

NnlsResult nnls(const DenseMatrix& a, const DenseVector& b) {
  if (a.rows() != b.size()) throw DomainError("nnls: row count mismatch");
  const std::size_t n = a.cols();
  const std::size_t max_outer = std::max<std::size_t>(50 * n, 1);

  NnlsResult res{DenseVector(n), 0, false};
  DenseVector& x = res.x;
  std::vector<bool> passive(n, false);

  const double scale = std::max(1.0, norm_inf(multiply_transposed(a, b.span()).span()));
  const double w_tol = 1e-13 * scale;
  const double a_max = max_abs(a);
  const double b_max = norm_inf(b.span());

  auto gradient = [&]() {
    DenseVector resid = b - multiply(a, x.span());
    return multiply_transposed(a, resid.span());
  };

  auto solve_passive = [&](std::vector<std::size_t>& idx) {
    idx.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (passive[j]) idx.push_back(j);
    DenseMatrix ap(a.rows(), idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k)
      std::copy_n(a.col(idx[k]).data(), a.rows(), ap.col(k).data());
    const DenseVector zp = least_squares(ap, b);
    DenseVector z(n);
    for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zp[k];
    return z;
  };

  std::vector<std::size_t> idx;
  while (res.iterations < max_outer) {
    const DenseVector w = gradient();
    // Rounding in Aᵀ(b − Ax) grows with ‖A‖·‖x‖; large exact fits otherwise
    // keep re-entering a variable whose gradient is pure noise.
    const double noise = std::numeric_limits<double>::epsilon() * static_cast<double>(a.rows()) *
                         a_max * (b_max + a_max * norm1(x.span()));
    std::size_t t = n;
    double wmax = std::max(w_tol, 100.0 * noise);
    for (std::size_t j = 0; j < n; ++j) {
      if (!passive[j] && w[j] > wmax) {
        wmax = w[j];
        t = j;
      }
    }
    if (t == n) {
      res.converged = true;
      return res;
    }
    ++res.iterations;
    passive[t] = true;

    for (std::size_t inner = 0; inner <= n; ++inner) {
      DenseVector z = solve_passive(idx);
      bool feasible = true;
      for (std::size_t j : idx) {
        if (z[j] <= 0.0) {
          feasible = false;
          break;
        }
      }
      if (feasible) {
        x = std::move(z);
        break;
      }
      double step = 1.0;
      for (std::size_t j : idx) {
        if (z[j] <= 0.0) {
          const double denom = x[j] - z[j];
          if (denom > 0.0) step = std::min(step, x[j] / denom);
        }
      }
      for (std::size_t j = 0; j < n; ++j) x[j] += step * (z[j] - x[j]);
      const double x_tol = 1e-14 * std::max(1.0, norm_inf(x.span()));
      for (std::size_t j : idx) {
        if (x[j] <= x_tol) {
          x[j] = 0.0;
          passive[j] = false;
        }
      }
    }
  }
  return res;
}

}  // namespace demix
