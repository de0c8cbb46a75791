#include "mobgen/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mobgen/errors.hpp"
#include "mobgen/evolution.hpp"

namespace mobgen {

DenseMatrix compose_window(std::span<const TransitionMatrix> matrices, std::size_t n) {
  if (matrices.empty()) return DenseMatrix::identity(n);
  if (matrices.front().size() != n) throw std::invalid_argument("compose_window: size mismatch");
  return compose_day(matrices).q;
}

DenseMatrix compose_window(std::span<const TransitionMatrix> day, StepWindow window) {
  if (day.empty()) throw std::invalid_argument("compose_window: no matrices");
  const std::size_t n = day.front().size();
  const int T = static_cast<int>(day.size());
  DenseMatrix acc = DenseMatrix::identity(n);
  for (int t = window.start; t < window.end; ++t)
    acc = multiply(day[static_cast<std::size_t>(((t % T) + T) % T)].entries, acc);
  return acc;
}

EmpiricalEstimator::EmpiricalEstimator(std::size_t n, StepWindow window)
    : n_(n), window_(window) {
  if (window.end < window.start) throw std::invalid_argument("EmpiricalEstimator: bad window");
}

void EmpiricalEstimator::add(const HopRecord& hop) {
  if (hop.t < window_.start || hop.t >= window_.end) return;
  if (hop.origin >= n_ || hop.dest >= n_)
    throw DataError("hop references node outside the network");
  if (hop.pep_id >= peps_.size()) peps_.resize(static_cast<std::size_t>(hop.pep_id) + 1);
  PepState& s = peps_[hop.pep_id];
  const std::string who = "pep " + std::to_string(hop.pep_id);
  if (hop.t == window_.start) {
    if (s.seen) throw DataError(who + " has duplicate hops at t=" + std::to_string(hop.t));
    s = {hop.origin, hop.dest, hop.t, true};
    return;
  }
  if (!s.seen || s.last_t != hop.t - 1)
    throw DataError(who + " has a gap before t=" + std::to_string(hop.t));
  if (s.current != hop.origin)
    throw DataError(who + " is discontinuous at t=" + std::to_string(hop.t));
  s.current = hop.dest;
  s.last_t = hop.t;
}

EmpiricalResult EmpiricalEstimator::finish() const {
  std::vector<std::uint64_t> f(n_ * n_, 0);  // column-major F(i, j)
  std::vector<std::uint64_t> x(n_, 0);
  for (std::size_t k = 0; k < peps_.size(); ++k) {
    const PepState& s = peps_[k];
    if (!s.seen) continue;
    if (s.last_t != window_.end - 1)
      throw DataError("pep " + std::to_string(k) + " ends at t=" + std::to_string(s.last_t) +
                      " before the window end");
    ++f[s.first * n_ + s.current];
    ++x[s.first];
  }
  DenseMatrix a(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    if (x[j] == 0) {
      a(j, j) = 1.0;
      continue;
    }
    for (std::size_t i = 0; i < n_; ++i)
      a(i, j) = static_cast<double>(f[j * n_ + i]) / static_cast<double>(x[j]);
  }
  return {std::move(a), std::move(x)};
}

EmpiricalResult empirical_matrix(std::span<const HopRecord> hops, StepWindow window,
                                 std::size_t n) {
  std::vector<HopRecord> sorted(hops.begin(), hops.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const HopRecord& a, const HopRecord& b) {
    return std::pair{a.t, a.pep_id} < std::pair{b.t, b.pep_id};
  });
  EmpiricalEstimator est(n, window);
  for (const auto& h : sorted) est.add(h);
  return est.finish();
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) s += p[i] * std::log(p[i] / q[i]);
  return s;
}

double js_divergence(std::span<const double> p, std::span<const double> q) {
  std::vector<double> m(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
  return 0.5 * kl_divergence(p, m) + 0.5 * kl_divergence(q, m);
}

VerificationReport metrics(const DenseMatrix& a_pep, const DenseMatrix& a_prod,
                           std::span<const std::uint64_t> origin_mass) {
  const std::size_t n = a_pep.size();
  if (a_prod.size() != n || origin_mass.size() != n)
    throw std::invalid_argument("metrics: dimension mismatch");

  std::vector<double> col_l1(n), col_sq(n), col_js(n);
  const auto signed_n = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t sj = 0; sj < signed_n; ++sj) {
    const auto j = static_cast<std::size_t>(sj);
    const auto p = a_pep.column(j);
    const auto q = a_prod.column(j);
    double l1 = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = p[i] - q[i];
      l1 += std::abs(d);
      sq += d * d;
    }
    col_l1[j] = l1;
    col_sq[j] = sq;
    col_js[j] = js_divergence(p, q);
  }

  const std::uint64_t total = std::accumulate(origin_mass.begin(), origin_mass.end(), std::uint64_t{0});
  const double nd = static_cast<double>(n);
  VerificationReport r;
  double sum_sq = 0.0;
  double w_sq = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = total > 0 ? static_cast<double>(origin_mass[j]) / static_cast<double>(total) : 0.0;
    r.l1_norm += col_l1[j];
    sum_sq += col_sq[j];
    r.mean_col_js += col_js[j];
    r.weighted_l1 += w * col_l1[j];
    w_sq += w * (col_sq[j] / nd);
    r.weighted_js += w * col_js[j];
  }
  r.rmse = std::sqrt(sum_sq / (nd * nd));
  r.mean_col_l1 = r.l1_norm / nd;
  r.mean_col_js /= nd;
  r.weighted_rmse = std::sqrt(w_sq);
  r.pep_count = total;
  r.node_count = n;
  return r;
}

}  // namespace mobgen
