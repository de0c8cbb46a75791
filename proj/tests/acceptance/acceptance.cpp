// Acceptance checks for the generator. Prints one PASS/FAIL line per
// criterion and exits nonzero if any fails.
#include <Eigen/Dense>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <string>

#include "mobgen/aggregate.hpp"
#include "mobgen/config.hpp"
#include "mobgen/verify.hpp"
#include "support.hpp"

using namespace mobgen;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_column_error(std::span<const TransitionMatrix> day) {
  double worst = 0.0;
  for (const auto& m : day) worst = std::max(worst, max_column_sum_error(m.entries));
  return worst;
}

// 1. Every column of every M_t sums to one.
Outcome column_stochasticity() {
  const Clock clock;
  const test::Model model(paper_default_config());
  const double err = max_column_error(model.day);
  const double secs = clock.seconds();
  return {model.day.size() == 48 && model.grid.size() == 99 && err <= 1e-12 && secs < 10.0,
          fmt("T=%zu N=%zu max |colsum-1|=%.3g (<=1e-12), %.2fs (<10s)", model.day.size(),
              model.grid.size(), err, secs)};
}

// 2. Scaling an origin's mass leaves its column unchanged; scaling k leaves
// every matrix unchanged. Each node's mass also enters other columns as a
// destination factor, so the origin check is per column.
Outcome mass_cancellation() {
  const RunConfig base = paper_default_config();
  const test::Model model(base);
  const std::size_t n = model.grid.size();
  double origin_diff = 0.0;
  for (NodeIndex j = 0; j < n; ++j) {
    KernelParams p = base.kernel;
    p.node_mass_scale.assign(n, 1.0);
    p.node_mass_scale[j] = 10.0;
    const auto day = TransitionKernel(model.grid, model.overlay, p, base.clock).build_day();
    for (std::size_t t = 0; t < day.size(); ++t)
      for (NodeIndex i = 0; i < n; ++i)
        origin_diff = std::max(origin_diff, std::abs(day[t](i, j) - model.day[t](i, j)));
  }
  KernelParams p = base.kernel;
  p.k = p.k.scaled(10.0);
  const auto day = TransitionKernel(model.grid, model.overlay, p, base.clock).build_day();
  double k_diff = 0.0;
  for (std::size_t t = 0; t < day.size(); ++t)
    k_diff = std::max(k_diff, max_abs_difference(day[t].entries, model.day[t].entries));
  return {origin_diff <= 1e-12 && k_diff <= 1e-12,
          fmt("origin mass x10 (all %zu origins): max column diff %.3g; k x10: max entry diff %.3g (<=1e-12)",
              n, origin_diff, k_diff)};
}

// Stationary vector by a dense linear solve.
Eigen::VectorXd linear_solve(const DenseMatrix& q) {
  const auto n = static_cast<Eigen::Index>(q.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = q(i, j) - (i == j ? 1.0 : 0.0);
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  return a.fullPivLu().solve(b);
}

// 3. Periodic fixed point.
Outcome fixed_point_check() {
  const Clock clock;
  const test::Model model(paper_default_config());
  const DailyMatrix q = compose_day(model.day);
  const FixedPointResult fp = fixed_point(q);
  const double residual = l1_distance(multiply(q.q, fp.p.p), fp.p.p);
  const double min_p = *std::min_element(fp.p.p.begin(), fp.p.p.end());
  const double sum = std::accumulate(fp.p.p.begin(), fp.p.p.end(), 0.0);

  const test::Model small(test::small_config(12));
  const DailyMatrix qs = compose_day(small.day);
  const auto sfp = fixed_point(qs);
  const Eigen::VectorXd oracle = linear_solve(qs.q);
  double oracle_diff = 0.0;
  for (std::size_t i = 0; i < small.grid.size(); ++i)
    oracle_diff = std::max(oracle_diff, std::abs(sfp.p.p[i] - oracle(static_cast<Eigen::Index>(i))));
  const double secs = clock.seconds();
  return {residual <= 1e-12 && min_p > 0.0 && std::abs(sum - 1.0) <= 1e-12 && small.grid.size() == 12 &&
              oracle_diff <= 1e-8 && secs < 30.0,
          fmt("|Qp-p|_1=%.3g (<=1e-12), min p*=%.3g (>0), |sum-1|=%.3g; 12-node linear solve diff %.3g "
              "(<=1e-8); %.2fs (<30s)",
              residual, min_p, std::abs(sum - 1.0), oracle_diff, secs)};
}

VerificationReport verify_run(const test::Model& model, const PopulationVector& p_star, std::uint64_t k,
                              std::uint64_t seed) {
  SimConfig s = model.config.sim;
  s.pep_count = k;
  s.seed = seed;
  s.window = *model.config.verify_window;
  EmpiricalEstimator est(model.grid.size(), s.window);
  realize(s, model.day, p_star, model.grid, model.config.clock, [&](std::span<const HopRecord> step) {
    for (const auto& h : step) est.add(h);
  });
  const auto emp = est.finish();
  return metrics(emp.a_pep, compose_window(model.day, s.window), emp.origin_mass);
}

std::string seven(const VerificationReport& r) {
  return fmt("l1=%.4f rmse=%.4e col_l1=%.5f col_js=%.4e w_l1=%.5f w_rmse=%.4e w_js=%.4e", r.l1_norm,
             r.rmse, r.mean_col_l1, r.mean_col_js, r.weighted_l1, r.weighted_rmse, r.weighted_js);
}

// 4. Empirical vs composed matrices over 06:00-09:00 at K = 120000.
Outcome trajectory_consistency(const test::Model& model, const PopulationVector& p_star) {
  const Clock clock;
  const auto r = verify_run(model, p_star, 120000, model.config.sim.seed);
  const double secs = clock.seconds();
  const bool window_ok = *model.config.verify_window == StepWindow{12, 18};
  return {window_ok && r.pep_count == 120000 && r.mean_col_js < 0.05 && r.mean_col_l1 < 0.5 && secs < 120.0,
          fmt("K=120000 window [12,18): %s; caps col_js<0.05 col_l1<0.5; %.2fs (<120s)", seven(r).c_str(),
              secs)};
}

// 5. Quadrupling K: first-order metrics shrink by about 2, JS metrics by about 4.
Outcome sampling_rate(const test::Model& model, const PopulationVector& p_star) {
  const Clock clock;
  auto ratios = [&](int seeds) {
    std::array<double, 7> small{}, large{};
    for (int s = 0; s < seeds; ++s) {
      const std::uint64_t seed = model.config.sim.seed + 1000 * static_cast<std::uint64_t>(s);
      const auto a = verify_run(model, p_star, 120000, seed);
      const auto b = verify_run(model, p_star, 480000, seed + 1);
      const std::array<double, 7> va{a.l1_norm, a.rmse, a.mean_col_l1, a.weighted_l1, a.weighted_rmse,
                                     a.mean_col_js, a.weighted_js};
      const std::array<double, 7> vb{b.l1_norm, b.rmse, b.mean_col_l1, b.weighted_l1, b.weighted_rmse,
                                     b.mean_col_js, b.weighted_js};
      for (int m = 0; m < 7; ++m) {
        small[m] += va[m];
        large[m] += vb[m];
      }
    }
    std::array<double, 7> r{};
    for (int m = 0; m < 7; ++m) r[m] = small[m] / large[m];
    return r;
  };
  auto within = [](const std::array<double, 7>& r) {
    for (int m = 0; m < 5; ++m)
      if (r[m] < 1.7 || r[m] > 2.3) return false;
    for (int m = 5; m < 7; ++m)
      if (r[m] < 2.8 || r[m] > 4.6) return false;
    return true;
  };
  int seeds = 1;
  auto r = ratios(1);
  if (!within(r)) {
    seeds = 3;
    r = ratios(3);
  }
  return {within(r),
          fmt("%d seed(s); ratios l1=%.3f rmse=%.3f col_l1=%.3f w_l1=%.3f w_rmse=%.3f in [1.7,2.3]; "
              "col_js=%.3f w_js=%.3f in [2.8,4.6]; %.2fs",
              seeds, r[0], r[1], r[2], r[3], r[4], r[5], r[6], clock.seconds())};
}

// 6. Destinations at (origin, t) do not depend on the predecessor node or on
// which half of the pep ids a PEP belongs to.
Outcome memorylessness() {
  const Clock clock;
  const test::Model model(test::small_config(20));
  const auto fp = model.solve();
  const std::size_t n = model.grid.size();
  SimConfig s = model.config.sim;
  s.pep_count = 50000;
  s.attribute = false;
  const std::uint64_t half = s.pep_count / 2;

  // tables[(origin, t)] rows: predecessor node; halves[(origin, t)] rows: id half.
  std::map<std::pair<NodeIndex, int>, std::vector<std::vector<std::uint64_t>>> by_pred, by_half;
  std::vector<NodeIndex> previous(s.pep_count, 0);
  bool first = true;
  realize(s, model.day, fp.p, model.grid, model.config.clock, [&](std::span<const HopRecord> step) {
    for (const auto& h : step) {
      const auto key = std::pair{h.origin, h.t};
      auto& halves = by_half[key];
      if (halves.empty()) halves.assign(2, std::vector<std::uint64_t>(n, 0));
      ++halves[h.pep_id < half ? 0 : 1][h.dest];
      if (!first) {
        auto& preds = by_pred[key];
        if (preds.empty()) preds.assign(n, std::vector<std::uint64_t>(n, 0));
        ++preds[previous[h.pep_id]][h.dest];
      }
      previous[h.pep_id] = h.origin;
    }
    first = false;
  });

  std::vector<test::ChiSquared> results;
  for (const auto* tables : {&by_pred, &by_half})
    for (const auto& [key, table] : *tables) {
      const auto r = test::homogeneity_test(table);
      if (r.dof > 0) results.push_back(r);
    }
  const double m = static_cast<double>(results.size());
  double min_p = 1.0;
  for (const auto& r : results) min_p = std::min(min_p, r.p_value);
  const double adjusted = std::min(1.0, min_p * m);
  const double secs = clock.seconds();
  return {n == 20 && !results.empty() && adjusted > 0.001 && secs < 60.0,
          fmt("N=%zu K=50000: %zu chi-squared tests, min p=%.3g, Bonferroni p=%.3g (>0.001); %.2fs (<60s)", n,
              results.size(), min_p, adjusted, secs)};
}

// 7. Distances stay in their envelopes, times in (0, 1800]; attribution does
// not touch destinations.
Outcome attribution(const test::Model& model, const PopulationVector& p_star) {
  const Clock clock;
  SimConfig s = model.config.sim;
  s.pep_count = 120000;
  std::vector<NodeIndex> dests;
  std::uint64_t hops = 0, outside = 0, bad_time = 0;
  realize(s, model.day, p_star, model.grid, model.config.clock, [&](std::span<const HopRecord> step) {
    for (const auto& h : step) {
      ++hops;
      const auto env = distance_envelope(model.grid, h.origin, h.dest);
      outside += h.distance_km < env.lo || h.distance_km > env.hi;
      bad_time += !(h.travel_time_s > 0.0 && h.travel_time_s <= 1800.0);
      dests.push_back(h.dest);
    }
  });
  s.attribute = false;
  std::size_t k = 0, changed = 0;
  realize(s, model.day, p_star, model.grid, model.config.clock, [&](std::span<const HopRecord> step) {
    for (const auto& h : step) changed += h.dest != dests[k++];
  });
  return {outside == 0 && bad_time == 0 && changed == 0 && k == dests.size() && hops == 120000ull * 8,
          fmt("%llu hops: %llu outside envelope, %llu times outside (0,1800]; attribution off changed %zu "
              "destinations; %.2fs",
              static_cast<unsigned long long>(hops), static_cast<unsigned long long>(outside),
              static_cast<unsigned long long>(bad_time), changed, clock.seconds())};
}

// 8. Population mass is conserved over a day and OD counts sum to K.
Outcome conservation(const test::Model& model, const PopulationVector& p_star) {
  double worst = 0.0;
  std::mt19937_64 rng(8);
  for (const auto& start : {p_star, PopulationVector{test::random_distribution(rng, model.grid.size()), 0}}) {
    PopulationVector p = start;
    for (const auto& m : model.day) {
      p = step(p, m);
      worst = std::max(worst, std::abs(p.total() - 1.0));
    }
  }
  SimConfig s = model.config.sim;
  std::map<int, std::uint64_t> per_t;
  realize(s, model.day, p_star, model.grid, model.config.clock, [&](std::span<const HopRecord> step) {
    for (const auto& r : aggregate_od(step)) per_t[r.t] += r.trips;
  });
  bool exact = per_t.size() == static_cast<std::size_t>(s.window.steps());
  for (const auto& [t, k] : per_t) exact = exact && k == s.pep_count;
  return {worst <= 1e-12 && exact,
          fmt("max |sum p_t - 1| over a day=%.3g (<=1e-12); OD trips per step == K=%llu at all %zu steps: %s",
              worst, static_cast<unsigned long long>(s.pep_count), per_t.size(), exact ? "yes" : "no")};
}

FlowTotals flows_at(const RunConfig& c, int t) {
  const test::Model model(c);
  const auto fp = model.solve();
  SimConfig s = c.sim;
  s.window = {c.sim.window.start, t + 1};
  FlowTotals totals;
  realize(s, model.day, fp.p, model.grid, c.clock, [&](std::span<const HopRecord> step) {
    if (step.front().t == t) totals = total_flows(edge_flows(step, model.overlay, t));
  });
  return totals;
}

// 9. The example ramp on inward bias makes inward flow dominate at 09:00; on
// outward bias it reverses.
Outcome bias_response() {
  const RunConfig base = paper_default_config();
  const int t = base.clock.step_of_minutes(parse_hhmm("09:00"));
  const RampSchedule example(1.0, {{base.clock.step_of_minutes(parse_hhmm("06:00")),
                                    base.clock.step_of_minutes(parse_hhmm("11:00")), 5.0},
                                   {base.clock.step_of_minutes(parse_hhmm("15:00")),
                                    base.clock.step_of_minutes(parse_hhmm("20:00")), 1.0}});
  RunConfig in = base;
  in.kernel.bias.inward = example;
  in.kernel.bias.outward = RampSchedule::constant(1.0);
  RunConfig out = base;
  out.kernel.bias.inward = RampSchedule::constant(1.0);
  out.kernel.bias.outward = example;
  const auto a = flows_at(in, t);
  const auto b = flows_at(out, t);
  return {a.inward > a.outward && b.outward > b.inward,
          fmt("t=%d, example ramp on inward: inward=%llu outward=%llu; on outward: inward=%llu outward=%llu", t,
              static_cast<unsigned long long>(a.inward), static_cast<unsigned long long>(a.outward),
              static_cast<unsigned long long>(b.inward), static_cast<unsigned long long>(b.outward))};
}

}  // namespace

int main() {
  const test::Model model(paper_default_config());
  const auto p_star = model.solve().p;

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 column stochasticity", column_stochasticity},
      {"2 origin-mass and k cancellation", mass_cancellation},
      {"3 fixed point", fixed_point_check},
      {"4 trajectory/matrix consistency", [&] { return trajectory_consistency(model, p_star); }},
      {"5 sampling-rate law", [&] { return sampling_rate(model, p_star); }},
      {"6 memorylessness and exchangeability", memorylessness},
      {"7 attribution envelopes", [&] { return attribution(model, p_star); }},
      {"8 conservation", [&] { return conservation(model, p_star); }},
      {"9 directional-bias response", bias_response},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
