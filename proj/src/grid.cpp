#include "mobgen/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <queue>

#include "mobgen/errors.hpp"

namespace mobgen {
namespace {

constexpr double kPitchRes6Km = 6.44;
constexpr int kMaxResolution = 15;
// Membership slack so lattice points sitting exactly on the boundary are kept.
constexpr double kBoundarySlackKm = 1e-9;

constexpr std::array<Axial, 6> kDirections{
    {{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}}};

PlanarPoint lattice_position(Axial a, double pitch, const GridConfig& c) {
  const double sqrt3 = std::numbers::sqrt3;
  return {pitch * (a.q + 0.5 * a.r) + c.lattice_offset_east_km,
          pitch * (0.5 * sqrt3 * a.r) + c.lattice_offset_north_km};
}

std::string cell_id(int resolution, Axial a) {
  return "h" + std::to_string(resolution) + "_" + std::to_string(a.q) + "_" +
         std::to_string(a.r);
}

}  // namespace

int axial_distance(Axial a, Axial b) {
  const int dq = a.q - b.q;
  const int dr = a.r - b.r;
  return std::max({std::abs(dq), std::abs(dr), std::abs(dq + dr)});
}

double pitch_for_resolution(int resolution) {
  if (resolution < 0 || resolution > kMaxResolution)
    throw ConfigError("grid resolution must lie in [0, 15], got " +
                      std::to_string(resolution));
  return kPitchRes6Km * std::pow(std::sqrt(7.0), 6 - resolution);
}

double hex_diameter_for_pitch(double pitch_km) {
  return 2.0 * pitch_km / std::numbers::sqrt3;
}

BaseGraph::BaseGraph(GridConfig config, std::vector<Cell> cells,
                     std::vector<std::vector<NodeIndex>> neighbors,
                     double nominal_pitch_km)
    : config_(config),
      cells_(std::move(cells)),
      neighbors_(std::move(neighbors)),
      nominal_pitch_km_(nominal_pitch_km),
      hex_diameter_km_(hex_diameter_for_pitch(nominal_pitch_km)),
      pitch_km_(0.0) {
  double sum = 0.0;
  std::size_t count = 0;
  for (NodeIndex i = 0; i < cells_.size(); ++i) {
    for (NodeIndex j : neighbors_[i]) {
      if (j <= i) continue;
      sum += haversine_km(cells_[i].centroid, cells_[j].centroid);
      ++count;
    }
  }
  pitch_km_ = count > 0 ? sum / static_cast<double>(count) : 0.0;
}

std::size_t BaseGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& n : neighbors_) twice += n.size();
  return twice / 2;
}

BaseGraph build_grid(const GridConfig& config) {
  if (!(config.radius_km > 0.0))
    throw ConfigError("grid radius_km must be positive");
  if (config.center_lat < -90.0 || config.center_lat > 90.0)
    throw ConfigError("grid center_lat out of range");
  const double pitch = pitch_for_resolution(config.resolution);

  const double reach = config.radius_km +
                       std::hypot(config.lattice_offset_east_km,
                                  config.lattice_offset_north_km);
  const int span = static_cast<int>(std::ceil(reach / (pitch * std::numbers::sqrt3 / 2.0))) + 1;

  std::vector<Axial> members;
  for (int q = -2 * span; q <= 2 * span; ++q) {
    for (int r = -span; r <= span; ++r) {
      const Axial a{q, r};
      const PlanarPoint p = lattice_position(a, pitch, config);
      if (std::hypot(p.x, p.y) <= config.radius_km + kBoundarySlackKm)
        members.push_back(a);
    }
  }
  std::sort(members.begin(), members.end());
  if (members.size() < 2)
    throw ConfigError("degenerate region: fewer than 2 cells inside radius");

  std::map<Axial, NodeIndex> index_of;
  for (NodeIndex i = 0; i < members.size(); ++i) index_of.emplace(members[i], i);

  const GeoPoint origin{config.center_lat, config.center_lon};
  std::vector<Cell> cells;
  cells.reserve(members.size());
  std::vector<std::vector<NodeIndex>> neighbors(members.size());
  for (NodeIndex i = 0; i < members.size(); ++i) {
    const Axial a = members[i];
    const PlanarPoint local = lattice_position(a, pitch, config);
    cells.push_back(Cell{cell_id(config.resolution, a), unproject(origin, local), a, local});
    for (const Axial& d : kDirections) {
      auto it = index_of.find(Axial{a.q + d.q, a.r + d.r});
      if (it != index_of.end()) neighbors[i].push_back(it->second);
    }
    std::sort(neighbors[i].begin(), neighbors[i].end());
  }

  BaseGraph g(config, std::move(cells), std::move(neighbors), pitch);
  const auto dist = bfs_distances(g, 0);
  if (std::any_of(dist.begin(), dist.end(), [](int d) { return d < 0; }))
    throw ConfigError("grid is not connected for this radius/offset");
  return g;
}

double centroid_distance(const BaseGraph& g, NodeIndex i, NodeIndex j) {
  if (i == j) return 0.0;
  return haversine_km(g.cell(i).centroid, g.cell(j).centroid);
}

std::vector<int> bfs_distances(const BaseGraph& g, NodeIndex source) {
  std::vector<int> dist(g.size(), -1);
  std::queue<NodeIndex> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const NodeIndex u = frontier.front();
    frontier.pop();
    for (NodeIndex v : g.neighbors(u)) {
      if (dist[v] >= 0) continue;
      dist[v] = dist[u] + 1;
      frontier.push(v);
    }
  }
  return dist;
}

int graph_distance(const BaseGraph& g, NodeIndex i, NodeIndex j) {
  return bfs_distances(g, i)[j];
}

std::vector<GeoPoint> hexagon_vertices(const BaseGraph& g, NodeIndex i) {
  const double circumradius = g.hex_diameter_km() / 2.0;
  const PlanarPoint c = g.cell(i).local;
  const GeoPoint origin{g.config().center_lat, g.config().center_lon};
  std::vector<GeoPoint> out;
  out.reserve(6);
  for (int k = 0; k < 6; ++k) {
    const double angle = std::numbers::pi / 6.0 + k * std::numbers::pi / 3.0;
    out.push_back(unproject(origin, {c.x + circumradius * std::cos(angle),
                                     c.y + circumradius * std::sin(angle)}));
  }
  return out;
}

}  // namespace mobgen
