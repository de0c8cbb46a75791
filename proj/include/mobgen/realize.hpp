#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mobgen/evolution.hpp"
#include "mobgen/grid.hpp"
#include "mobgen/kernel.hpp"
#include "mobgen/rng.hpp"
#include "mobgen/schedule.hpp"

namespace mobgen {

/// Half-open range of absolute time-step indices [start, end). Indices past
/// one day address the day's matrices modulo T.
struct StepWindow {
  int start = 0;
  int end = 0;
  int steps() const { return end - start; }
  bool operator==(const StepWindow&) const = default;
};

/// Truncated normal speed distribution in km/h.
struct SpeedModel {
  double mean_kmh = 30.0;
  double sd_kmh = 10.0;
  double min_kmh = 5.0;
  double max_kmh = 80.0;

  void validate() const;
};

struct SimConfig {
  std::uint64_t pep_count = 1;
  StepWindow window;
  std::uint64_t seed = 0;
  SpeedModel speed;
  bool attribute = true;  // distance/time attribution; off leaves both at 0

  void validate() const;
};

/// One realized transition origin -> dest during time-step t.
struct HopRecord {
  std::uint32_t pep_id = 0;
  std::int32_t t = 0;
  NodeIndex origin = 0;
  NodeIndex dest = 0;
  double distance_km = 0.0;
  double travel_time_s = 0.0;

  bool operator==(const HopRecord&) const = default;
};

struct DistanceEnvelope {
  double lo = 0.0;
  double hi = 0.0;
};

/// [max(0, d - D_hex), d + D_hex] between distinct cells, [0, D_hex] for a self-hop.
DistanceEnvelope distance_envelope(const BaseGraph& g, NodeIndex j, NodeIndex i);

/// Inverse-CDF categorical draw over `probs` in index order. A `u` beyond the
/// accumulated total falls back to the last positive entry.
NodeIndex draw_categorical(std::span<const double> probs, double u);

/// One categorical draw per PEP from `p`, each on its own placement stream.
std::vector<NodeIndex> place_peps(std::span<const double> p, std::uint64_t pep_count,
                                  std::uint64_t seed, int t);

/// Per-node PEP counts of place_peps; sums to pep_count.
std::vector<std::uint64_t> initial_placement(const PopulationVector& p, std::uint64_t pep_count,
                                             std::uint64_t seed);

/// Single categorical draw from column j of M_t (dense scan).
NodeIndex sample_transition(NodeIndex j, const TransitionMatrix& m, StreamRng& rng);

double attribute_distance(const DistanceEnvelope& env, StreamRng& rng);
double attribute_distance(NodeIndex j, NodeIndex i, const BaseGraph& g, StreamRng& rng);

double sample_speed(const SpeedModel& model, StreamRng& rng);

/// distance / speed, truncated to the step duration, floored at one second.
double travel_time_seconds(double distance_km, double speed_kmh, const DayClock& clock);

double attribute_time(double distance_km, const DayClock& clock, const SpeedModel& model,
                      StreamRng& rng);

/// Sparse cumulative distributions of every column of one M_t. Draws agree
/// exactly with draw_categorical over the dense column.
class StepSampler {
 public:
  explicit StepSampler(const TransitionMatrix& m);

  NodeIndex sample(NodeIndex j, double u) const;
  std::span<const NodeIndex> support(NodeIndex j) const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeIndex> index_;
  std::vector<double> cumulative_;
};

/// Distribution at absolute step t obtained by stepping p_star (the periodic
/// fixed point at step 0) through M_0 .. M_{(t mod T) - 1}.
PopulationVector population_at(std::span<const TransitionMatrix> day,
                               const PopulationVector& p_star, int t);

/// Receives the K records of one time-step, sorted by pep_id.
using HopSink = std::function<void(std::span<const HopRecord>)>;

/// Places K PEPs from the population at window.start, then for every step of
/// the window emits one hop per PEP (self-hops included). PEPs are sharded
/// across threads; the output is independent of the thread count.
/// `day` must hold M_0 .. M_{T-1} in order.
void realize(const SimConfig& sim, std::span<const TransitionMatrix> day,
             const PopulationVector& p_star, const BaseGraph& grid, const DayClock& clock,
             const HopSink& sink);

std::vector<HopRecord> realize_all(const SimConfig& sim, std::span<const TransitionMatrix> day,
                                   const PopulationVector& p_star, const BaseGraph& grid,
                                   const DayClock& clock);

}  // namespace mobgen
