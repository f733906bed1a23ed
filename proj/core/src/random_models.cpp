#include "demix/random_models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "demix/error.hpp"
#include "demix/linalg.hpp"

namespace demix::models {

SparsityPattern SparsityPattern::of(const DenseVector& x) {
  SparsityPattern p;
  p.dim = x.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) {
      p.support.push_back(i);
      p.signs.push_back(x[i] > 0.0 ? 1.0 : -1.0);
    }
  }
  return p;
}

void SparsityPattern::validate() const {
  if (signs.size() != support.size())
    throw DomainError("SparsityPattern: support and signs differ in length");
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (support[k] >= dim) throw DomainError("SparsityPattern: support index out of range");
    if (k > 0 && support[k] <= support[k - 1])
      throw DomainError("SparsityPattern: support must be strictly increasing");
    if (signs[k] != 1.0 && signs[k] != -1.0)
      throw DomainError("SparsityPattern: signs must be +1 or -1");
  }
}

std::size_t ceil_count(double tau, std::size_t d) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("ceil_count: tau must lie in [0, 1]");
  return static_cast<std::size_t>(std::ceil(tau * static_cast<double>(d) - 1e-9));
}

std::size_t round_count(double tau, std::size_t d) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("round_count: tau must lie in [0, 1]");
  return static_cast<std::size_t>(std::llround(tau * static_cast<double>(d)));
}

DenseMatrix haar_orthogonal(std::size_t d, RngState& rng) {
  if (d == 0) throw DomainError("haar_orthogonal: d must be at least 1");
  DenseMatrix g(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) g(i, j) = rng.normal();
  QrResult qr = qr_decompose(g);
  for (std::size_t j = 0; j < d; ++j) {
    if (qr.r(j, j) < 0.0) {
      for (double& x : qr.q.col(j)) x = -x;
    }
  }
  return std::move(qr.q);
}

DenseVector sparse_signal(std::size_t d, std::size_t k, RngState& rng) {
  if (k > d) {
    throw DomainError("sparse_signal: k = " + std::to_string(k) + " exceeds d = " +
                      std::to_string(d));
  }
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  // Partial Fisher–Yates: the first k slots become a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(d - i));
    std::swap(idx[i], idx[j]);
  }
  DenseVector x(d);
  for (std::size_t i = 0; i < k; ++i) x[idx[i]] = rng.sign();
  return x;
}

DenseVector sign_vector(std::size_t d, RngState& rng) {
  DenseVector m(d);
  for (std::size_t i = 0; i < d; ++i) m[i] = rng.sign();
  return m;
}

DenseMatrix low_rank_matrix(std::size_t n, std::size_t r, RngState& rng) {
  if (r > n) {
    throw DomainError("low_rank_matrix: rank " + std::to_string(r) + " exceeds side " +
                      std::to_string(n));
  }
  if (n == 0) return {};
  const DenseMatrix left = haar_orthogonal(n, rng);
  const DenseMatrix right = haar_orthogonal(n, rng);
  // Q_L Λ Q_R = Σ_{i<r} (column i of Q_L)(row i of Q_R)
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < r; ++i) {
    const double* u = left.col(i).data();
    for (std::size_t j = 0; j < n; ++j) {
      const double w = right(i, j);
      double* o = out.col(j).data();
      for (std::size_t a = 0; a < n; ++a) o[a] += u[a] * w;
    }
  }
  return out;
}

DenseVector erase(const DenseVector& x, std::size_t k) {
  if (k > x.size()) throw DomainError("erase: k exceeds the vector length");
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(x[a]) > std::abs(x[b]);
  });
  DenseVector out = x;
  for (std::size_t i = 0; i < k; ++i) out[order[i]] = 0.0;
  return out;
}

}  // namespace demix::models
