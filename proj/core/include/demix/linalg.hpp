#pragma once

#include <cstddef>
#include <vector>

#include "demix/dense.hpp"

namespace demix {

struct QrResult {
  DenseMatrix q;  ///< orthogonal
  DenseMatrix r;  ///< upper triangular
};

/// Householder QR of a square matrix. Throws DomainError for non-square or
/// non-finite input.
[[nodiscard]] QrResult qr_decompose(const DenseMatrix& m);

/// Thin SVD: input is U·diag(σ)·Vᵀ with σ sorted descending. For an m×n
/// input U is m×p, V is n×p with p = min(m, n); both have orthonormal columns.
struct SvdResult {
  DenseMatrix u;
  std::vector<double> singular_values;
  DenseMatrix v;

  [[nodiscard]] DenseMatrix reconstruct() const;
};

/// One-sided (Hestenes) Jacobi SVD.
[[nodiscard]] SvdResult svd(const DenseMatrix& m);

/// Numerical rank: count of σᵢ > rel_cutoff·σ₁.
[[nodiscard]] std::size_t matrix_rank(const DenseMatrix& m, double rel_cutoff = 1e-8);

/// Minimum-norm least-squares solution of A x ≈ b via the SVD pseudo-inverse.
[[nodiscard]] DenseVector least_squares(const DenseMatrix& a, const DenseVector& b,
                                        double rel_cutoff = 1e-12);

struct NnlsResult {
  DenseVector x;
  std::size_t iterations = 0;
  bool converged = false;  ///< false when the iteration cap was hit; x is the best iterate
};

/// Lawson–Hanson active-set NNLS: argmin_{x ≥ 0} ‖A x − b‖₂.
/// The outer loop is capped at 50·cols iterations.
[[nodiscard]] NnlsResult nnls(const DenseMatrix& a, const DenseVector& b);

}  // namespace demix
