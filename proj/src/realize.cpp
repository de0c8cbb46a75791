#include "mobgen/realize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mobgen/errors.hpp"

namespace mobgen {
namespace {

constexpr int kMaxSpeedRejections = 1000;
constexpr double kMinTravelTimeS = 1.0;

void check_day(std::span<const TransitionMatrix> day, const DayClock& clock) {
  if (day.size() != static_cast<std::size_t>(clock.steps_per_day))
    throw std::invalid_argument("realize: expected one matrix per step of the day");
  for (std::size_t k = 0; k < day.size(); ++k)
    if (day[k].t != static_cast<int>(k))
      throw std::invalid_argument("realize: day matrices must be ordered M_0 .. M_{T-1}");
}

const TransitionMatrix& matrix_at(std::span<const TransitionMatrix> day, int t) {
  const int T = static_cast<int>(day.size());
  return day[static_cast<std::size_t>(((t % T) + T) % T)];
}

}  // namespace

void SpeedModel::validate() const {
  if (!(min_kmh > 0.0 && min_kmh < max_kmh))
    throw ConfigError("speed model requires 0 < min_kmh < max_kmh");
  if (!(sd_kmh >= 0.0)) throw ConfigError("speed model sd_kmh must be nonnegative");
  if (!std::isfinite(mean_kmh)) throw ConfigError("speed model mean_kmh must be finite");
}

void SimConfig::validate() const {
  if (pep_count < 1) throw ConfigError("simulation pep_count must be at least 1");
  if (pep_count > 0xffffffffULL) throw ConfigError("simulation pep_count exceeds 32-bit ids");
  if (window.start < 0 || window.start >= window.end)
    throw ConfigError("simulation window must satisfy 0 <= start < end");
  speed.validate();
}

DistanceEnvelope distance_envelope(const BaseGraph& g, NodeIndex j, NodeIndex i) {
  const double dhex = g.hex_diameter_km();
  if (i == j) return {0.0, dhex};
  const double d = centroid_distance(g, j, i);
  return {std::max(0.0, d - dhex), d + dhex};
}

NodeIndex draw_categorical(std::span<const double> probs, double u) {
  double c = 0.0;
  NodeIndex last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] > 0.0)) continue;
    c += probs[i];
    last = static_cast<NodeIndex>(i);
    if (u < c) return last;
  }
  return last;
}

std::vector<NodeIndex> place_peps(std::span<const double> p, std::uint64_t pep_count,
                                  std::uint64_t seed, int t) {
  std::vector<NodeIndex> loc(pep_count);
  const auto n = static_cast<std::int64_t>(pep_count);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    StreamRng rng(seed, static_cast<std::uint64_t>(k), t, Purpose::placement);
    loc[static_cast<std::size_t>(k)] = draw_categorical(p, rng.uniform01());
  }
  return loc;
}

std::vector<std::uint64_t> initial_placement(const PopulationVector& p, std::uint64_t pep_count,
                                             std::uint64_t seed) {
  std::vector<std::uint64_t> counts(p.p.size(), 0);
  for (NodeIndex loc : place_peps(p.p, pep_count, seed, p.t)) ++counts[loc];
  return counts;
}

NodeIndex sample_transition(NodeIndex j, const TransitionMatrix& m, StreamRng& rng) {
  return draw_categorical(m.entries.column(j), rng.uniform01());
}

double attribute_distance(const DistanceEnvelope& env, StreamRng& rng) {
  return env.lo + (env.hi - env.lo) * rng.uniform01();
}

double attribute_distance(NodeIndex j, NodeIndex i, const BaseGraph& g, StreamRng& rng) {
  return attribute_distance(distance_envelope(g, j, i), rng);
}

double sample_speed(const SpeedModel& model, StreamRng& rng) {
  if (model.sd_kmh == 0.0) return std::clamp(model.mean_kmh, model.min_kmh, model.max_kmh);
  for (int k = 0; k < kMaxSpeedRejections; ++k) {
    const double v = model.mean_kmh + model.sd_kmh * rng.normal();
    if (v >= model.min_kmh && v <= model.max_kmh) return v;
  }
  // Truncation window far in the tail: fall back to uniform on it.
  return model.min_kmh + (model.max_kmh - model.min_kmh) * rng.uniform01();
}

double travel_time_seconds(double distance_km, double speed_kmh, const DayClock& clock) {
  const double raw = distance_km / speed_kmh * 3600.0;
  return std::max(kMinTravelTimeS, std::min(raw, clock.step_seconds()));
}

double attribute_time(double distance_km, const DayClock& clock, const SpeedModel& model,
                      StreamRng& rng) {
  return travel_time_seconds(distance_km, sample_speed(model, rng), clock);
}

StepSampler::StepSampler(const TransitionMatrix& m) : offsets_(m.size() + 1, 0) {
  const std::size_t n = m.size();
  for (std::size_t j = 0; j < n; ++j) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = m(i, j);
      if (!(v > 0.0)) continue;
      c += v;
      index_.push_back(static_cast<NodeIndex>(i));
      cumulative_.push_back(c);
    }
    offsets_[j + 1] = index_.size();
  }
}

NodeIndex StepSampler::sample(NodeIndex j, double u) const {
  const auto first = cumulative_.begin() + static_cast<std::ptrdiff_t>(offsets_[j]);
  const auto last = cumulative_.begin() + static_cast<std::ptrdiff_t>(offsets_[j + 1]);
  auto it = std::upper_bound(first, last, u);
  if (it == last) --it;
  return index_[static_cast<std::size_t>(it - cumulative_.begin())];
}

std::span<const NodeIndex> StepSampler::support(NodeIndex j) const {
  return std::span<const NodeIndex>(index_).subspan(offsets_[j], offsets_[j + 1] - offsets_[j]);
}

PopulationVector population_at(std::span<const TransitionMatrix> day,
                               const PopulationVector& p_star, int t) {
  const int T = static_cast<int>(day.size());
  const int steps = ((t % T) + T) % T;
  PopulationVector p{p_star.p, 0};
  for (int k = 0; k < steps; ++k) p = step(p, day[static_cast<std::size_t>(k)]);
  p.t = t;
  return p;
}

void realize(const SimConfig& sim, std::span<const TransitionMatrix> day,
             const PopulationVector& p_star, const BaseGraph& grid, const DayClock& clock,
             const HopSink& sink) {
  sim.validate();
  check_day(day, clock);
  if (p_star.p.size() != grid.size())
    throw std::invalid_argument("realize: population size does not match the grid");

  const PopulationVector p0 = population_at(day, p_star, sim.window.start);
  std::vector<NodeIndex> loc = place_peps(p0.p, sim.pep_count, sim.seed, sim.window.start);
  std::vector<HopRecord> batch(sim.pep_count);
  const auto n = static_cast<std::int64_t>(sim.pep_count);

  for (int t = sim.window.start; t < sim.window.end; ++t) {
    const StepSampler sampler(matrix_at(day, t));
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < n; ++k) {
      const auto pep = static_cast<std::uint64_t>(k);
      const NodeIndex j = loc[static_cast<std::size_t>(k)];
      StreamRng dest_rng(sim.seed, pep, t, Purpose::destination);
      const NodeIndex i = sampler.sample(j, dest_rng.uniform01());
      HopRecord& rec = batch[static_cast<std::size_t>(k)];
      rec = HopRecord{static_cast<std::uint32_t>(pep), t, j, i, 0.0, 0.0};
      if (sim.attribute) {
        StreamRng dist_rng(sim.seed, pep, t, Purpose::distance);
        StreamRng speed_rng(sim.seed, pep, t, Purpose::speed);
        rec.distance_km = attribute_distance(distance_envelope(grid, j, i), dist_rng);
        rec.travel_time_s = attribute_time(rec.distance_km, clock, sim.speed, speed_rng);
      }
      loc[static_cast<std::size_t>(k)] = i;
    }
    sink(batch);
  }
}

std::vector<HopRecord> realize_all(const SimConfig& sim, std::span<const TransitionMatrix> day,
                                   const PopulationVector& p_star, const BaseGraph& grid,
                                   const DayClock& clock) {
  std::vector<HopRecord> out;
  out.reserve(sim.pep_count * static_cast<std::size_t>(std::max(0, sim.window.steps())));
  realize(sim, day, p_star, grid, clock,
          [&](std::span<const HopRecord> b) { out.insert(out.end(), b.begin(), b.end()); });
  return out;
}

}  // namespace mobgen
