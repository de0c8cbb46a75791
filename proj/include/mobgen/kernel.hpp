#pragma once

#include <vector>

#include "mobgen/dense_matrix.hpp"
#include "mobgen/grid.hpp"
#include "mobgen/overlay.hpp"
#include "mobgen/schedule.hpp"

namespace mobgen {

/// Static structural weight omega per edge class.
struct ClassWeights {
  double backbone = 1.5;
  double feeder = 1.0;
  double metro = 2.0;
  double secondary_feeder_multiplier = 0.5;

  double weight(const DirectedEdge& e) const;
};

struct NodeClassSchedules {
  RampSchedule center;     // nodes with potential <= center_class_max_potential
  RampSchedule periphery;  // everything else
};

struct BiasSchedules {
  RampSchedule inward = RampSchedule::constant(1.0);   // b_{+1}
  RampSchedule outward = RampSchedule::constant(1.0);  // b_{-1}
  RampSchedule neutral = RampSchedule::constant(1.0);  // b_{0}
};

struct KernelParams {
  double alpha = 1.0;
  double beta = 2.0;
  int center_class_max_potential = 1;
  double stay_min = 0.05;
  double stay_max = 0.98;

  NodeClassSchedules stay{RampSchedule::constant(0.8), RampSchedule::constant(0.8)};
  NodeClassSchedules mass{RampSchedule::constant(1.0), RampSchedule::constant(1.0)};
  RampSchedule hub_stay_factor = RampSchedule::constant(1.0);
  RampSchedule hub_mass_factor = RampSchedule::constant(1.0);
  ClassWeights class_weights;
  RampSchedule metro = RampSchedule::constant(1.0);
  BiasSchedules bias;
  RampSchedule k = RampSchedule::constant(1.0);

  /// Optional per-node multiplier on m_i(t); empty means all ones.
  std::vector<double> node_mass_scale;

  /// Throws ConfigError on invalid exponents, clamps or schedules.
  void validate(const DayClock& clock) const;
};

/// One time-step transition matrix; entry (i, j) is P(j -> i).
struct TransitionMatrix {
  int t = 0;
  DenseMatrix entries;

  std::size_t size() const { return entries.size(); }
  double operator()(std::size_t i, std::size_t j) const { return entries(i, j); }
};

/// Assembles the column-stochastic matrices M_t from the gravity kernel,
/// structural weights and the stay, mass, metro and bias schedules.
///
/// Holds references to the grid and overlay; both must outlive the kernel.
class TransitionKernel {
 public:
  TransitionKernel(const BaseGraph& grid, const OverlayNetwork& overlay, KernelParams params,
                   DayClock clock);

  const BaseGraph& grid() const { return grid_; }
  const OverlayNetwork& overlay() const { return overlay_; }
  const KernelParams& params() const { return params_; }
  const DayClock& clock() const { return clock_; }
  std::size_t size() const { return grid_.size(); }

  bool is_center_class(NodeIndex i) const;
  double node_mass(NodeIndex i, int t) const;
  double stay_probability(NodeIndex j, int t) const;
  double bias_factor(const DirectedEdge& e, int t) const;
  /// Unnormalized w_ij(t) for the overlay edge j -> i.
  double edge_weight(const DirectedEdge& e, int t) const;

  /// Throws NumericError("isolated origin") if some column has no outgoing weight.
  TransitionMatrix build_matrix(int t) const;

  /// M_0 .. M_{T-1}, built concurrently over t.
  std::vector<TransitionMatrix> build_day() const;

 private:
  double weight_with_distance(const DirectedEdge& e, double d, int t) const;

  const BaseGraph& grid_;
  const OverlayNetwork& overlay_;
  KernelParams params_;
  DayClock clock_;
  std::vector<double> edge_distance_;  // d_ij per overlay edge, same order as overlay.edges()
};

}  // namespace mobgen
