#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mobgen/dense_matrix.hpp"
#include "mobgen/kernel.hpp"
#include "mobgen/realize.hpp"

namespace mobgen {

/// M_{t_m} ... M_{t_1} for consecutive matrices; the identity of size `n`
/// when the list is empty.
DenseMatrix compose_window(std::span<const TransitionMatrix> matrices, std::size_t n);

/// Composition over an absolute-step window using a day of matrices
/// M_0 .. M_{T-1} (indices taken modulo T).
DenseMatrix compose_window(std::span<const TransitionMatrix> day, StepWindow window);

struct EmpiricalResult {
  DenseMatrix a_pep;
  std::vector<std::uint64_t> origin_mass;  // x_{t0}(j)
};

/// Streaming estimator of the end-to-end matrix: F_ij counts PEPs first seen
/// at j at window.start and last seen at i after window.end - 1. Columns
/// without origins fall back to the identity column.
///
/// Hops must arrive in nondecreasing t for each PEP; hops outside the window
/// are ignored. Throws DataError on a gap or discontinuity.
class EmpiricalEstimator {
 public:
  EmpiricalEstimator(std::size_t n, StepWindow window);

  void add(const HopRecord& hop);
  EmpiricalResult finish() const;

 private:
  struct PepState {
    NodeIndex first = 0;
    NodeIndex current = 0;
    int last_t = -1;
    bool seen = false;
  };

  std::size_t n_;
  StepWindow window_;
  std::vector<PepState> peps_;
};

EmpiricalResult empirical_matrix(std::span<const HopRecord> hops, StepWindow window,
                                 std::size_t n);

/// KL(p || q) in nats; terms with p_i = 0 contribute zero.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// Jensen-Shannon divergence in nats.
double js_divergence(std::span<const double> p, std::span<const double> q);

struct VerificationReport {
  double l1_norm = 0.0;
  double rmse = 0.0;
  double mean_col_l1 = 0.0;
  double mean_col_js = 0.0;
  double weighted_l1 = 0.0;
  double weighted_rmse = 0.0;
  double weighted_js = 0.0;
  std::uint64_t pep_count = 0;  // sum of origin masses
  std::size_t node_count = 0;
  StepWindow window;
};

/// All seven discrepancy metrics of D = A_pep - A_prod. Column terms are
/// computed in parallel and summed serially in column order.
VerificationReport metrics(const DenseMatrix& a_pep, const DenseMatrix& a_prod,
                           std::span<const std::uint64_t> origin_mass);

}  // namespace mobgen
