#include "mobgen/evolution.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mobgen/errors.hpp"

namespace mobgen {
namespace {

void normalize(std::vector<double>& p) {
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= s;
}

double residual_l1(const DenseMatrix& q, const std::vector<double>& p) {
  const auto qp = multiply(q, p);
  return l1_distance(qp, p);
}

}  // namespace

double PopulationVector::total() const { return std::accumulate(p.begin(), p.end(), 0.0); }

PopulationVector uniform_population(std::size_t n, int t) {
  return {std::vector<double>(n, 1.0 / static_cast<double>(n)), t};
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

PopulationVector step(const PopulationVector& p, const TransitionMatrix& m) {
  if (p.p.size() != m.size())
    throw std::invalid_argument("step: population has " + std::to_string(p.p.size()) +
                                " entries but matrix is " + std::to_string(m.size()));
  return {multiply(m.entries, p.p), p.t + 1};
}

DailyMatrix compose_day(std::span<const TransitionMatrix> matrices) {
  if (matrices.empty()) throw std::invalid_argument("compose_day: no matrices");
  for (std::size_t k = 1; k < matrices.size(); ++k) {
    if (matrices[k].t != matrices[k - 1].t + 1)
      throw std::invalid_argument("compose_day: matrices must have consecutive time indices");
    if (matrices[k].size() != matrices[0].size())
      throw std::invalid_argument("compose_day: dimension mismatch");
  }
  DenseMatrix acc = matrices[0].entries;
  for (std::size_t k = 1; k < matrices.size(); ++k) acc = multiply(matrices[k].entries, acc);
  return {std::move(acc), matrices.front().t, matrices.back().t};
}

FixedPointResult fixed_point(const DailyMatrix& q, double tol, int max_iter) {
  const std::size_t n = q.q.size();
  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  double residual = residual_l1(q.q, p);
  int it = 0;
  while (residual > tol && it < max_iter) {
    p = multiply(q.q, p);
    normalize(p);
    residual = residual_l1(q.q, p);
    ++it;
  }
  if (residual > tol)
    throw NumericError("fixed point did not converge in " + std::to_string(max_iter) +
                           " iterations (residual " + std::to_string(residual) + ")",
                       residual);
  return {{std::move(p), 0}, residual, it};
}

}  // namespace mobgen
