#pragma once

#include <cstddef>
#include <vector>

#include "demix/dense.hpp"
#include "demix/rng.hpp"

namespace demix::models {

/// Support and signs of a sparse vector in ℝᵈ.
struct SparsityPattern {
  std::size_t dim = 0;
  std::vector<std::size_t> support;  ///< distinct, ascending, < dim
  std::vector<double> signs;         ///< ±1, aligned with `support`

  [[nodiscard]] std::size_t nnz() const noexcept { return support.size(); }
  /// Reads the pattern off the nonzero entries of x.
  static SparsityPattern of(const DenseVector& x);
  /// Throws DomainError when the invariants above do not hold.
  void validate() const;
};

/// Number of nonzeros ⌈τd⌉ (tolerant of τd landing a rounding error above an integer).
[[nodiscard]] std::size_t ceil_count(double tau, std::size_t d);
/// Number of nonzeros [τd], rounded to nearest.
[[nodiscard]] std::size_t round_count(double tau, std::size_t d);

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// columns of Q rescaled by sign(diag R) (zero diagonal entries count as +1).
[[nodiscard]] DenseMatrix haar_orthogonal(std::size_t d, RngState& rng);

/// k nonzeros at uniformly random distinct positions, each ±1 with equal probability.
[[nodiscard]] DenseVector sparse_signal(std::size_t d, std::size_t k, RngState& rng);

/// Uniform random element of {±1}ᵈ.
[[nodiscard]] DenseVector sign_vector(std::size_t d, RngState& rng);

/// Q_L·diag(1,…,1,0,…,0)·Q_R with r ones and independent Haar factors.
[[nodiscard]] DenseMatrix low_rank_matrix(std::size_t n, std::size_t r, RngState& rng);

/// Zeroes the k largest-magnitude entries of x; ties go to the lowest index first.
[[nodiscard]] DenseVector erase(const DenseVector& x, std::size_t k);

}  // namespace demix::models
