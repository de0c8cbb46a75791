#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "mobgen/geo.hpp"

namespace mobgen {

using NodeIndex = std::uint32_t;

/// Region and lattice parameters for the synthetic hexagonal tessellation.
///
/// The lattice origin (cell q = r = 0) sits at `lattice_offset_*_km` from the
/// region center in the local tangent plane. A zero offset puts a cell centroid
/// on the center; non-zero offsets reach node counts that a centered disc
/// cannot produce.
struct GridConfig {
  double center_lat = 0.0;
  double center_lon = 0.0;
  double radius_km = 0.0;
  int resolution = 6;
  double lattice_offset_east_km = 0.0;
  double lattice_offset_north_km = 0.0;
};

struct Axial {
  int q = 0;
  int r = 0;
  auto operator<=>(const Axial&) const = default;
};

/// Hex metric on axial coordinates.
int axial_distance(Axial a, Axial b);

struct Cell {
  std::string id;
  GeoPoint centroid;
  Axial axial;
  PlanarPoint local;  // km, relative to the region center
};

/// Centroid pitch (km) for a resolution; 6.44 km at resolution 6, scaled by
/// powers of sqrt(7) elsewhere. Throws ConfigError outside [0, 15].
double pitch_for_resolution(int resolution);

/// Hexagon diameter (twice the circumradius) for a centroid pitch.
double hex_diameter_for_pitch(double pitch_km);

class BaseGraph {
 public:
  BaseGraph(GridConfig config, std::vector<Cell> cells,
            std::vector<std::vector<NodeIndex>> neighbors, double nominal_pitch_km);

  std::size_t size() const { return cells_.size(); }
  const GridConfig& config() const { return config_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const Cell& cell(NodeIndex i) const { return cells_[i]; }
  const std::vector<NodeIndex>& neighbors(NodeIndex i) const { return neighbors_[i]; }

  /// Mean great-circle distance between adjacent centroids.
  double pitch_km() const { return pitch_km_; }
  double nominal_pitch_km() const { return nominal_pitch_km_; }
  /// D_hex, the bound used by the distance envelopes.
  double hex_diameter_km() const { return hex_diameter_km_; }
  std::size_t edge_count() const;

 private:
  GridConfig config_;
  std::vector<Cell> cells_;
  std::vector<std::vector<NodeIndex>> neighbors_;
  double nominal_pitch_km_;
  double hex_diameter_km_;
  double pitch_km_;
};

/// Enumerates every lattice cell whose centroid lies inside the disc, sorted
/// by axial (q, r), and links axial-distance-one pairs.
/// Throws ConfigError("degenerate region") for fewer than two cells.
BaseGraph build_grid(const GridConfig& config);

double centroid_distance(const BaseGraph& g, NodeIndex i, NodeIndex j);

/// Unweighted BFS hop counts from `source` to every node (-1 if unreachable).
std::vector<int> bfs_distances(const BaseGraph& g, NodeIndex source);

int graph_distance(const BaseGraph& g, NodeIndex i, NodeIndex j);

/// Six hexagon vertices of a cell in lat/lon (pointy-top in the local plane).
std::vector<GeoPoint> hexagon_vertices(const BaseGraph& g, NodeIndex i);

}  // namespace mobgen
