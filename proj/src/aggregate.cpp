#include "mobgen/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

#include "mobgen/errors.hpp"

namespace mobgen {

SampleStats summarize(std::span<double> values) {
  SampleStats s;
  const std::size_t n = values.size();
  if (n == 0) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(n));
  std::sort(values.begin(), values.end());
  s.median = n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  return s;
}

std::vector<ODSummaryRow> aggregate_od(std::span<const HopRecord> hops, int window_steps) {
  if (window_steps < 1) throw std::invalid_argument("aggregate_od: window_steps must be >= 1");
  std::vector<ODSummaryRow> rows;
  if (hops.empty()) return rows;

  int anchor = hops.front().t;
  for (const auto& h : hops) anchor = std::min(anchor, static_cast<int>(h.t));
  auto bucket = [&](int t) { return anchor + ((t - anchor) / window_steps) * window_steps; };

  std::vector<std::size_t> order(hops.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key = [&](std::size_t k) {
    return std::tuple{bucket(hops[k].t), hops[k].origin, hops[k].dest};
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

  std::vector<double> dist;
  std::vector<double> time;
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo;
    const auto k0 = key(order[lo]);
    dist.clear();
    time.clear();
    while (hi < order.size() && key(order[hi]) == k0) {
      dist.push_back(hops[order[hi]].distance_km);
      time.push_back(hops[order[hi]].travel_time_s);
      ++hi;
    }
    const SampleStats d = summarize(dist);
    const SampleStats tt = summarize(time);
    rows.push_back({std::get<1>(k0), std::get<2>(k0), std::get<0>(k0), hi - lo, d.mean, d.median,
                    d.std, tt.mean, tt.median, tt.std});
    lo = hi;
  }
  return rows;
}

std::vector<EdgeFlow> edge_flows(std::span<const HopRecord> hops, const OverlayNetwork& overlay,
                                 int t) {
  std::map<std::pair<NodeIndex, NodeIndex>, EdgeFlow> acc;
  for (const auto& h : hops) {
    if (h.t != t || h.origin == h.dest) continue;
    const DirectedEdge* e = overlay.find_edge(h.origin, h.dest);
    if (e == nullptr)
      throw DataError("hop " + std::to_string(h.origin) + " -> " + std::to_string(h.dest) +
                      " at t=" + std::to_string(t) + " does not follow an overlay edge");
    if (e->sign == 0) continue;
    const NodeIndex outer = e->sign > 0 ? h.origin : h.dest;
    const NodeIndex inner = e->sign > 0 ? h.dest : h.origin;
    auto [it, fresh] = acc.try_emplace({outer, inner}, EdgeFlow{outer, inner, t, 0, 0, 0});
    if (e->sign > 0)
      ++it->second.inward;
    else
      ++it->second.outward;
  }
  std::vector<EdgeFlow> out;
  out.reserve(acc.size());
  for (auto& [k, f] : acc) {
    f.net = static_cast<std::int64_t>(f.inward) - static_cast<std::int64_t>(f.outward);
    out.push_back(f);
  }
  return out;
}

FlowTotals total_flows(std::span<const EdgeFlow> flows) {
  FlowTotals s;
  for (const auto& f : flows) {
    s.inward += f.inward;
    s.outward += f.outward;
  }
  return s;
}

}  // namespace mobgen
