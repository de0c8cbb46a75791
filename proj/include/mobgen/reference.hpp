#pragma once

// Serial reference implementations of the parallel kernels. They follow the
// defining formulas directly and exist to cross-check the optimized paths in
// tests and benchmarks.

#include <span>
#include <vector>

#include "mobgen/dense_matrix.hpp"
#include "mobgen/evolution.hpp"
#include "mobgen/kernel.hpp"
#include "mobgen/realize.hpp"
#include "mobgen/verify.hpp"

namespace mobgen::reference {

/// Triple loop, k summed in ascending order for every (i, j).
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);

/// Dense per-entry evaluation of the normalized kernel formula.
TransitionMatrix build_matrix(const TransitionKernel& kernel, int t);

std::vector<TransitionMatrix> build_day(const TransitionKernel& kernel);

DenseMatrix compose(std::span<const TransitionMatrix> matrices, std::size_t n);

/// Single-threaded realization drawing destinations from the dense columns.
std::vector<HopRecord> realize(const SimConfig& sim, std::span<const TransitionMatrix> day,
                               const PopulationVector& p_star, const BaseGraph& grid,
                               const DayClock& clock);

VerificationReport metrics(const DenseMatrix& a_pep, const DenseMatrix& a_prod,
                           std::span<const std::uint64_t> origin_mass);

}  // namespace mobgen::reference
