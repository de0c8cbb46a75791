#include "mobgen/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace mobgen::reference {

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t n = a.size();
  DenseMatrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

TransitionMatrix build_matrix(const TransitionKernel& kernel, int t) {
  const std::size_t n = kernel.size();
  const auto& overlay = kernel.overlay();
  TransitionMatrix m{t, DenseMatrix(n)};
  for (NodeIndex j = 0; j < n; ++j) {
    double total = 0.0;
    for (NodeIndex i = 0; i < n; ++i) {
      if (i == j) continue;
      if (const DirectedEdge* e = overlay.find_edge(j, i)) total += kernel.edge_weight(*e, t);
    }
    const double s = kernel.stay_probability(j, t);
    for (NodeIndex i = 0; i < n; ++i) {
      if (i == j) {
        m.entries(i, j) = s;
      } else if (const DirectedEdge* e = overlay.find_edge(j, i)) {
        m.entries(i, j) = (1.0 - s) * kernel.edge_weight(*e, t) / total;
      }
    }
  }
  return m;
}

std::vector<TransitionMatrix> build_day(const TransitionKernel& kernel) {
  std::vector<TransitionMatrix> day;
  for (int t = 0; t < kernel.clock().steps_per_day; ++t) day.push_back(build_matrix(kernel, t));
  return day;
}

DenseMatrix compose(std::span<const TransitionMatrix> matrices, std::size_t n) {
  DenseMatrix acc = DenseMatrix::identity(n);
  for (const auto& m : matrices) acc = reference::multiply(m.entries, acc);
  return acc;
}

std::vector<HopRecord> realize(const SimConfig& sim, std::span<const TransitionMatrix> day,
                               const PopulationVector& p_star, const BaseGraph& grid,
                               const DayClock& clock) {
  const int T = static_cast<int>(day.size());
  PopulationVector p{p_star.p, 0};
  for (int k = 0; k < sim.window.start % T; ++k) p = step(p, day[static_cast<std::size_t>(k)]);

  std::vector<NodeIndex> loc(sim.pep_count);
  for (std::uint64_t k = 0; k < sim.pep_count; ++k) {
    StreamRng rng(sim.seed, k, sim.window.start, Purpose::placement);
    loc[k] = draw_categorical(p.p, rng.uniform01());
  }

  std::vector<HopRecord> out;
  for (int t = sim.window.start; t < sim.window.end; ++t) {
    const TransitionMatrix& m = day[static_cast<std::size_t>(t % T)];
    for (std::uint64_t k = 0; k < sim.pep_count; ++k) {
      StreamRng dest_rng(sim.seed, k, t, Purpose::destination);
      const NodeIndex j = loc[k];
      const NodeIndex i = sample_transition(j, m, dest_rng);
      HopRecord rec{static_cast<std::uint32_t>(k), t, j, i, 0.0, 0.0};
      if (sim.attribute) {
        StreamRng dist_rng(sim.seed, k, t, Purpose::distance);
        StreamRng speed_rng(sim.seed, k, t, Purpose::speed);
        rec.distance_km = attribute_distance(j, i, grid, dist_rng);
        rec.travel_time_s = attribute_time(rec.distance_km, clock, sim.speed, speed_rng);
      }
      out.push_back(rec);
      loc[k] = i;
    }
  }
  return out;
}

VerificationReport metrics(const DenseMatrix& a_pep, const DenseMatrix& a_prod,
                           std::span<const std::uint64_t> origin_mass) {
  const std::size_t n = a_pep.size();
  const double nd = static_cast<double>(n);
  double total = 0.0;
  for (auto x : origin_mass) total += static_cast<double>(x);

  VerificationReport r;
  double sq = 0.0;
  double wsq = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = total > 0.0 ? static_cast<double>(origin_mass[j]) / total : 0.0;
    double col_l1 = 0.0;
    double col_sq = 0.0;
    double kl_p = 0.0;
    double kl_q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = a_pep(i, j);
      const double q = a_prod(i, j);
      const double d = p - q;
      col_l1 += std::abs(d);
      col_sq += d * d;
      const double m = 0.5 * (p + q);
      if (p > 0.0) kl_p += p * std::log(p / m);
      if (q > 0.0) kl_q += q * std::log(q / m);
    }
    const double js = 0.5 * kl_p + 0.5 * kl_q;
    r.l1_norm += col_l1;
    sq += col_sq;
    r.mean_col_js += js / nd;
    r.weighted_l1 += w * col_l1;
    wsq += w * col_sq / nd;
    r.weighted_js += w * js;
  }
  r.rmse = std::sqrt(sq / (nd * nd));
  r.mean_col_l1 = r.l1_norm / nd;
  r.weighted_rmse = std::sqrt(wsq);
  r.pep_count = static_cast<std::uint64_t>(total);
  r.node_count = n;
  return r;
}

}  // namespace mobgen::reference
