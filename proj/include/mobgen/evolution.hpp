#pragma once

#include <span>
#include <vector>

#include "mobgen/dense_matrix.hpp"
#include "mobgen/kernel.hpp"

namespace mobgen {

struct PopulationVector {
  std::vector<double> p;
  int t = 0;

  double total() const;
};

PopulationVector uniform_population(std::size_t n, int t = 0);

/// p_{t+1} = M_t p_t. Throws std::invalid_argument on dimension mismatch.
PopulationVector step(const PopulationVector& p, const TransitionMatrix& m);

/// Product M_last ... M_first of consecutive one-step matrices.
struct DailyMatrix {
  DenseMatrix q;
  int first_t = 0;
  int last_t = 0;
};

/// Left-multiplies the matrices in order. Throws std::invalid_argument when
/// the list is empty or the time indices are not consecutive.
DailyMatrix compose_day(std::span<const TransitionMatrix> matrices);

struct FixedPointResult {
  PopulationVector p;
  double residual = 0.0;  // ||Q p - p||_1
  int iterations = 0;
};

/// Power iteration from the uniform vector, renormalized to unit mass each
/// iterate. Throws NumericError carrying the final residual on non-convergence.
FixedPointResult fixed_point(const DailyMatrix& q, double tol = 1e-12, int max_iter = 100000);

double l1_distance(std::span<const double> a, std::span<const double> b);

}  // namespace mobgen
