#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mobgen {

/// Square dense matrix stored column-major, so that column j (the outgoing
/// distribution of origin j in a column-stochastic matrix) is contiguous.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[j * n_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * n_ + i]; }

  std::span<double> column(std::size_t j) { return {data_.data() + j * n_, n_}; }
  std::span<const double> column(std::size_t j) const { return {data_.data() + j * n_, n_}; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// C = A * B, parallel over output columns.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);

/// y = A * x.
std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x);

/// Largest |sum_i A_ij - 1| over columns.
double max_column_sum_error(const DenseMatrix& a);

double max_abs_difference(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace mobgen
