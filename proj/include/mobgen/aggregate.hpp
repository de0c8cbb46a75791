#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mobgen/overlay.hpp"
#include "mobgen/realize.hpp"

namespace mobgen {

/// Trip statistics for one (origin, dest, t) group. Standard deviations use
/// the population convention (divide by n); medians of even-sized groups
/// average the two middle values.
struct ODSummaryRow {
  NodeIndex origin = 0;
  NodeIndex dest = 0;
  int t = 0;
  std::uint64_t trips = 0;
  double dist_mean = 0.0;
  double dist_median = 0.0;
  double dist_std = 0.0;
  double time_mean = 0.0;
  double time_median = 0.0;
  double time_std = 0.0;

  bool operator==(const ODSummaryRow&) const = default;
};

struct SampleStats {
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;
};

/// Mean, median and population standard deviation; `values` is reordered.
SampleStats summarize(std::span<double> values);

/// Groups hops by (origin, dest, window) and emits nonzero groups sorted by
/// (t, origin, dest). With window_steps > 1, consecutive steps starting at the
/// earliest hop's t are pooled and the row carries the window's first step.
std::vector<ODSummaryRow> aggregate_od(std::span<const HopRecord> hops, int window_steps = 1);

/// Directional hop counts on one undirected overlay edge, oriented from the
/// outer endpoint (higher potential) `src` to the inner endpoint `dst`.
struct EdgeFlow {
  NodeIndex src = 0;
  NodeIndex dst = 0;
  int t = 0;
  std::uint64_t inward = 0;   // hops src -> dst
  std::uint64_t outward = 0;  // hops dst -> src
  std::int64_t net = 0;       // inward - outward

  bool operator==(const EdgeFlow&) const = default;
};

/// Edge flows at step t. Self-hops and neutral (equal-potential) edges carry
/// no orientation and are skipped; edges without hops are omitted.
/// Throws DataError for a hop that does not follow an overlay edge.
std::vector<EdgeFlow> edge_flows(std::span<const HopRecord> hops, const OverlayNetwork& overlay,
                                 int t);

struct FlowTotals {
  std::uint64_t inward = 0;
  std::uint64_t outward = 0;
};

FlowTotals total_flows(std::span<const EdgeFlow> flows);

}  // namespace mobgen
