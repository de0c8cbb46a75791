#include "mobgen/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "mobgen/errors.hpp"

namespace mobgen {

double ClassWeights::weight(const DirectedEdge& e) const {
  switch (e.cls) {
    case EdgeClass::backbone: return backbone;
    case EdgeClass::metro: return metro;
    case EdgeClass::feeder: return e.secondary ? feeder * secondary_feeder_multiplier : feeder;
  }
  return 0.0;
}

void KernelParams::validate(const DayClock& clock) const {
  if (!(alpha >= 0.0)) throw ConfigError("kernel alpha must be nonnegative");
  if (!(beta > 0.0)) throw ConfigError("kernel beta must be positive");
  if (!(stay_min > 0.0 && stay_min < stay_max && stay_max < 1.0))
    throw ConfigError("kernel stay clamp must satisfy 0 < stay_min < stay_max < 1");
  if (!(class_weights.backbone > 0.0 && class_weights.feeder > 0.0 && class_weights.metro > 0.0 &&
        class_weights.secondary_feeder_multiplier > 0.0))
    throw ConfigError("kernel class weights must be positive");
  for (double s : node_mass_scale)
    if (!(s > 0.0)) throw ConfigError("kernel node_mass_scale entries must be positive");
  auto check = [&](const RampSchedule& s, const char* name) {
    try {
      s.validate(clock);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("kernel schedule '") + name + "': " + e.what());
    }
  };
  check(stay.center, "stay.center");
  check(stay.periphery, "stay.periphery");
  check(mass.center, "mass.center");
  check(mass.periphery, "mass.periphery");
  check(hub_stay_factor, "hub_stay_factor");
  check(hub_mass_factor, "hub_mass_factor");
  check(metro, "metro");
  check(bias.inward, "bias.inward");
  check(bias.outward, "bias.outward");
  check(bias.neutral, "bias.neutral");
  check(k, "k");
}

TransitionKernel::TransitionKernel(const BaseGraph& grid, const OverlayNetwork& overlay,
                                   KernelParams params, DayClock clock)
    : grid_(grid), overlay_(overlay), params_(std::move(params)), clock_(clock) {
  if (overlay_.node_count() != grid_.size())
    throw ConfigError("kernel: overlay and grid node counts differ");
  if (!params_.node_mass_scale.empty() && params_.node_mass_scale.size() != grid_.size())
    throw ConfigError("kernel: node_mass_scale must have one entry per node");
  edge_distance_.reserve(overlay_.edges().size());
  for (const auto& e : overlay_.edges())
    edge_distance_.push_back(centroid_distance(grid_, e.src, e.dst));
}

bool TransitionKernel::is_center_class(NodeIndex i) const {
  return overlay_.potential(i) <= params_.center_class_max_potential;
}

double TransitionKernel::node_mass(NodeIndex i, int t) const {
  const RampSchedule& cls = is_center_class(i) ? params_.mass.center : params_.mass.periphery;
  double m = cls.eval(t, clock_);
  if (overlay_.is_hub(i)) m *= params_.hub_mass_factor.eval(t, clock_);
  if (!params_.node_mass_scale.empty()) m *= params_.node_mass_scale[i];
  return m;
}

double TransitionKernel::stay_probability(NodeIndex j, int t) const {
  const RampSchedule& cls = is_center_class(j) ? params_.stay.center : params_.stay.periphery;
  double s = cls.eval(t, clock_);
  if (overlay_.is_hub(j)) s *= params_.hub_stay_factor.eval(t, clock_);
  return std::clamp(s, params_.stay_min, params_.stay_max);
}

double TransitionKernel::bias_factor(const DirectedEdge& e, int t) const {
  const RampSchedule& b = e.sign > 0   ? params_.bias.inward
                          : e.sign < 0 ? params_.bias.outward
                                       : params_.bias.neutral;
  double phi = b.eval(t, clock_);
  if (e.cls == EdgeClass::metro) phi *= params_.metro.eval(t, clock_);
  return phi;
}

double TransitionKernel::edge_weight(const DirectedEdge& e, int t) const {
  return weight_with_distance(e, centroid_distance(grid_, e.src, e.dst), t);
}

double TransitionKernel::weight_with_distance(const DirectedEdge& e, double d, int t) const {
  const double mi = node_mass(e.dst, t);
  const double mj = node_mass(e.src, t);
  return params_.k.eval(t, clock_) * std::pow(mi, params_.alpha) * std::pow(mj, params_.alpha) /
         std::pow(d, params_.beta) * params_.class_weights.weight(e) * bias_factor(e, t);
}

TransitionMatrix TransitionKernel::build_matrix(int t) const {
  const std::size_t n = grid_.size();
  TransitionMatrix m{t, DenseMatrix(n)};
  std::vector<double> w;
  for (NodeIndex j = 0; j < n; ++j) {
    const auto out = overlay_.out_edges(j);
    const auto base = static_cast<std::size_t>(out.data() - overlay_.edges().data());
    w.assign(out.size(), 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
      w[k] = weight_with_distance(out[k], edge_distance_[base + k], t);
      total += w[k];
    }
    if (!(total > 0.0))
      throw NumericError("isolated origin: node " + std::to_string(j) +
                         " has zero outgoing weight at t=" + std::to_string(t));
    const double s = stay_probability(j, t);
    auto col = m.entries.column(j);
    col[j] = s;
    for (std::size_t k = 0; k < out.size(); ++k) col[out[k].dst] = (1.0 - s) * w[k] / total;
  }
  return m;
}

std::vector<TransitionMatrix> TransitionKernel::build_day() const {
  const int T = clock_.steps_per_day;
  std::vector<TransitionMatrix> day(static_cast<std::size_t>(T));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < T; ++t) {
    try {
      day[static_cast<std::size_t>(t)] = build_matrix(t);
    } catch (...) {
#pragma omp critical
      failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return day;
}

}  // namespace mobgen
