#include "mobgen/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mobgen {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("multiply: dimension mismatch");
  const std::size_t n = a.size();
  DenseMatrix c(n);
  const auto signed_n = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t sj = 0; sj < signed_n; ++sj) {
    const auto j = static_cast<std::size_t>(sj);
    auto out = c.column(j);
    for (std::size_t k = 0; k < n; ++k) {
      const double bkj = b(k, j);
      const auto ak = a.column(k);
      for (std::size_t i = 0; i < n; ++i) out[i] += ak[i] * bkj;
    }
  }
  return c;
}

std::vector<double> multiply(const DenseMatrix& a, std::span<const double> x) {
  if (a.size() != x.size()) throw std::invalid_argument("multiply: dimension mismatch");
  const std::size_t n = a.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double xk = x[k];
    const auto ak = a.column(k);
    for (std::size_t i = 0; i < n; ++i) y[i] += ak[i] * xk;
  }
  return y;
}

double max_column_sum_error(const DenseMatrix& a) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    double s = 0.0;
    for (double v : a.column(j)) s += v;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

double max_abs_difference(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_abs_difference: dimension mismatch");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
  return worst;
}

}  // namespace mobgen
