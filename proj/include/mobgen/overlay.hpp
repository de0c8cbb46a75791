#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mobgen/grid.hpp"

namespace mobgen {

enum class FeederMode { single, multi };

struct OverlaySpec {
  std::optional<NodeIndex> center_node;  // default: node nearest the region center
  int n_bands = 3;
  int hubs_per_band = 2;
  int min_hub_separation_hops = 2;
  FeederMode feeder_mode = FeederMode::single;
};

enum class EdgeClass : std::uint8_t { backbone, feeder, metro };

std::string_view to_string(EdgeClass c);

/// Label carried by an undirected overlay edge while the overlay is assembled.
struct EdgeLabel {
  EdgeClass cls = EdgeClass::feeder;
  bool secondary = false;  // feeder reached only through a second-nearest-hub path
};

/// Undirected edges keyed by (min, max) endpoint.
using EdgeSet = std::map<std::pair<NodeIndex, NodeIndex>, EdgeLabel>;

std::pair<NodeIndex, NodeIndex> edge_key(NodeIndex a, NodeIndex b);

struct HubSelection {
  std::vector<NodeIndex> hubs;  // ascending
  bool shortfall = false;       // some band could not be filled
};

/// Directed admissible transition src -> dst, i.e. (j -> i) with j = src.
struct DirectedEdge {
  NodeIndex src = 0;
  NodeIndex dst = 0;
  EdgeClass cls = EdgeClass::feeder;
  bool secondary = false;
  int sign = 0;  // sign(psi_src - psi_dst): +1 inward, -1 outward, 0 neutral
};

class OverlayNetwork {
 public:
  OverlayNetwork(NodeIndex center, std::vector<NodeIndex> hubs, bool hub_shortfall,
                 std::vector<DirectedEdge> edges, std::vector<int> potentials);

  NodeIndex center() const { return center_; }
  const std::vector<NodeIndex>& hubs() const { return hubs_; }
  bool is_hub(NodeIndex i) const { return is_hub_[i]; }
  bool hub_shortfall() const { return hub_shortfall_; }
  std::size_t node_count() const { return potentials_.size(); }

  /// All directed edges sorted by (src, dst).
  const std::vector<DirectedEdge>& edges() const { return edges_; }
  std::span<const DirectedEdge> out_edges(NodeIndex j) const;
  const DirectedEdge* find_edge(NodeIndex src, NodeIndex dst) const;

  int potential(NodeIndex i) const { return potentials_[i]; }
  const std::vector<int>& potentials() const { return potentials_; }

 private:
  NodeIndex center_;
  std::vector<NodeIndex> hubs_;
  std::vector<bool> is_hub_;
  bool hub_shortfall_;
  std::vector<DirectedEdge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<int> potentials_;
};

/// Node whose centroid is nearest the region center (ties: lowest index).
NodeIndex default_center(const BaseGraph& g);

HubSelection select_hubs(const BaseGraph& g, const OverlaySpec& spec, NodeIndex center);

/// Deterministic shortest path from `from` to `to` on base adjacency: each step
/// moves to the lowest-index neighbor one hop closer to `to`.
std::vector<NodeIndex> shortest_path(const BaseGraph& g, NodeIndex from, NodeIndex to);

EdgeSet build_backbone(const BaseGraph& g, std::span<const NodeIndex> hubs, NodeIndex center);

EdgeSet build_feeders(const BaseGraph& g, std::span<const NodeIndex> hubs, NodeIndex center,
                      FeederMode mode);

EdgeSet build_metro(const BaseGraph& g, std::span<const NodeIndex> hubs, NodeIndex center);

/// Merges the three edge sets (class precedence metro > backbone > feeder),
/// symmetrizes, computes potentials and signs, and checks strong connectivity.
OverlayNetwork finalize(const BaseGraph& g, NodeIndex center, const HubSelection& hubs,
                        const EdgeSet& backbone, const EdgeSet& feeders, const EdgeSet& metro);

OverlayNetwork build_overlay(const BaseGraph& g, const OverlaySpec& spec);

/// True if every node reaches every other node along directed edges.
bool strongly_connected(std::size_t n, std::span<const DirectedEdge> edges);

}  // namespace mobgen
