#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace demix {

/// Real vector with value semantics.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t dim, double fill = 0.0) : data_(dim, fill) {}
  DenseVector(std::initializer_list<double> values) : data_(values) {}
  explicit DenseVector(std::vector<double> values) : data_(std::move(values)) {}

  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  [[nodiscard]] double* data() noexcept { return data_.data(); }
  [[nodiscard]] const double* data() const noexcept { return data_.data(); }
  [[nodiscard]] std::span<double> span() noexcept { return data_; }
  [[nodiscard]] std::span<const double> span() const noexcept { return data_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  DenseVector& operator+=(const DenseVector& other);
  DenseVector& operator-=(const DenseVector& other);
  DenseVector& operator*=(double scale) noexcept;

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> data_;
};

DenseVector operator+(DenseVector lhs, const DenseVector& rhs);
DenseVector operator-(DenseVector lhs, const DenseVector& rhs);
DenseVector operator*(double scale, DenseVector v);

[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double norm2(std::span<const double> v);
[[nodiscard]] double norm1(std::span<const double> v);
[[nodiscard]] double norm_inf(std::span<const double> v);
/// ‖a − b‖∞
[[nodiscard]] double max_abs_diff(std::span<const double> a, std::span<const double> b);
[[nodiscard]] bool all_finite(std::span<const double> v);

/// Column-major real matrix with value semantics.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  /// Takes ownership of column-major storage; throws DomainError on a size mismatch.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major);

  /// Row-wise literal, e.g. DenseMatrix::from_rows({{1, 2}, {3, 4}}).
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

  [[nodiscard]] std::span<double> col(std::size_t j) noexcept {
    return {data_.data() + j * rows_, rows_};
  }
  [[nodiscard]] std::span<const double> col(std::size_t j) const noexcept {
    return {data_.data() + j * rows_, rows_};
  }
  [[nodiscard]] DenseVector row(std::size_t i) const;

  [[nodiscard]] double* data() noexcept { return data_.data(); }
  [[nodiscard]] const double* data() const noexcept { return data_.data(); }
  [[nodiscard]] std::span<const double> span() const noexcept { return data_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return data_; }

  [[nodiscard]] DenseMatrix transposed() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// A·v
[[nodiscard]] DenseVector multiply(const DenseMatrix& a, std::span<const double> v);
/// Aᵀ·v
[[nodiscard]] DenseVector multiply_transposed(const DenseMatrix& a, std::span<const double> v);
/// A·B
[[nodiscard]] DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
/// Aᵀ·B
[[nodiscard]] DenseMatrix multiply_transposed(const DenseMatrix& a, const DenseMatrix& b);
/// A·Bᵀ
[[nodiscard]] DenseMatrix multiply_by_transpose(const DenseMatrix& a, const DenseMatrix& b);

[[nodiscard]] double max_abs(const DenseMatrix& a);
[[nodiscard]] double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
/// ‖QᵀQ − I‖∞, the orthogonality defect of a square matrix.
[[nodiscard]] double orthogonality_defect(const DenseMatrix& q);

/// Reinterpret a column-major n×n matrix as its vec and back.
[[nodiscard]] DenseVector vec(const DenseMatrix& m);
[[nodiscard]] DenseMatrix unvec(const DenseVector& v, std::size_t rows, std::size_t cols);

}  // namespace demix
