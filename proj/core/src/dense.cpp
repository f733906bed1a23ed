#include "demix/dense.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "demix/error.hpp"

namespace demix {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DomainError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                      " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

DenseVector& DenseVector::operator+=(const DenseVector& other) {
  require_same_size(size(), other.size(), "DenseVector::operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseVector& DenseVector::operator-=(const DenseVector& other) {
  require_same_size(size(), other.size(), "DenseVector::operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

DenseVector& DenseVector::operator*=(double scale) noexcept {
  for (double& x : data_) x *= scale;
  return *this;
}

DenseVector operator+(DenseVector lhs, const DenseVector& rhs) { return lhs += rhs; }
DenseVector operator-(DenseVector lhs, const DenseVector& rhs) { return lhs -= rhs; }
DenseVector operator*(double scale, DenseVector v) { return v *= scale; }

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) {
  // Scaled accumulation so that huge or tiny entries do not overflow.
  double scale = 0.0;
  double ssq = 1.0;
  for (double x : v) {
    if (x == 0.0) continue;
    const double ax = std::abs(x);
    if (scale < ax) {
      ssq = 1.0 + ssq * (scale / ax) * (scale / ax);
      scale = ax;
    } else {
      ssq += (ax / scale) * (ax / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

double norm1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), data_(std::move(column_major)) {
  if (data_.size() != rows * cols) {
    throw DomainError("DenseMatrix: storage size " + std::to_string(data_.size()) +
                      " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t m = rows.size();
  const std::size_t n = m == 0 ? 0 : rows.begin()->size();
  DenseMatrix out(m, n);
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != n) throw DomainError("DenseMatrix::from_rows: ragged rows");
    std::size_t j = 0;
    for (double x : r) out(i, j++) = x;
    ++i;
  }
  return out;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  DenseMatrix out(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) out(i, i) = diag[i];
  return out;
}

DenseVector DenseMatrix::row(std::size_t i) const {
  DenseVector out(cols_);
  for (std::size_t j = 0; j < cols_; ++j) out[j] = (*this)(i, j);
  return out;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) out(j, i) = (*this)(i, j);
  return out;
}

DenseVector multiply(const DenseMatrix& a, std::span<const double> v) {
  require_same_size(a.cols(), v.size(), "multiply(matrix, vector)");
  DenseVector out(a.rows());
  double* o = out.data();
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const double vj = v[j];
    if (vj == 0.0) continue;
    const double* c = a.col(j).data();
    for (std::size_t i = 0; i < a.rows(); ++i) o[i] += c[i] * vj;
  }
  return out;
}

DenseVector multiply_transposed(const DenseMatrix& a, std::span<const double> v) {
  require_same_size(a.rows(), v.size(), "multiply_transposed(matrix, vector)");
  DenseVector out(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const double* c = a.col(j).data();
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += c[i] * v[i];
    out[j] = s;
  }
  return out;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_size(a.cols(), b.rows(), "multiply(matrix, matrix)");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    double* o = out.col(j).data();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj == 0.0) continue;
      const double* c = a.col(k).data();
      for (std::size_t i = 0; i < a.rows(); ++i) o[i] += c[i] * bkj;
    }
  }
  return out;
}

DenseMatrix multiply_transposed(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_size(a.rows(), b.rows(), "multiply_transposed(matrix, matrix)");
  DenseMatrix out(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < a.cols(); ++i) out(i, j) = dot(a.col(i), b.col(j));
  return out;
}

DenseMatrix multiply_by_transpose(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_size(a.cols(), b.cols(), "multiply_by_transpose");
  DenseMatrix out(a.rows(), b.rows());
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const double* ac = a.col(k).data();
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const double bjk = b(j, k);
      if (bjk == 0.0) continue;
      double* o = out.col(j).data();
      for (std::size_t i = 0; i < a.rows(); ++i) o[i] += ac[i] * bjk;
    }
  }
  return out;
}

double max_abs(const DenseMatrix& a) { return norm_inf(a.span()); }

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DomainError("max_abs_diff: shape mismatch");
  return max_abs_diff(a.span(), b.span());
}

double orthogonality_defect(const DenseMatrix& q) {
  const DenseMatrix gram = multiply_transposed(q, q);
  double m = 0.0;
  for (std::size_t j = 0; j < gram.cols(); ++j)
    for (std::size_t i = 0; i < gram.rows(); ++i)
      m = std::max(m, std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)));
  return m;
}

DenseVector vec(const DenseMatrix& m) { return DenseVector(m.values()); }

DenseMatrix unvec(const DenseVector& v, std::size_t rows, std::size_t cols) {
  return DenseMatrix(rows, cols, v.values());
}

}  // namespace demix
