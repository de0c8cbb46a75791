#include "mobgen/overlay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "mobgen/errors.hpp"

namespace mobgen {
namespace {

int label_rank(const EdgeLabel& l) {
  switch (l.cls) {
    case EdgeClass::metro: return 3;
    case EdgeClass::backbone: return 2;
    case EdgeClass::feeder: return l.secondary ? 0 : 1;
  }
  return 0;
}

void insert_ranked(EdgeSet& set, std::pair<NodeIndex, NodeIndex> key, EdgeLabel label) {
  auto [it, inserted] = set.emplace(key, label);
  if (!inserted && label_rank(label) > label_rank(it->second)) it->second = label;
}

// Walks from `from` toward the BFS root of `dist`, always taking the
// lowest-index neighbor one level closer.
std::vector<NodeIndex> walk_down(const BaseGraph& g, const std::vector<int>& dist,
                                 NodeIndex from) {
  std::vector<NodeIndex> path{from};
  NodeIndex cur = from;
  while (dist[cur] > 0) {
    for (NodeIndex v : g.neighbors(cur)) {  // neighbors are sorted ascending
      if (dist[v] == dist[cur] - 1) {
        cur = v;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

void add_path(EdgeSet& set, const std::vector<NodeIndex>& path, EdgeLabel label) {
  for (std::size_t k = 1; k < path.size(); ++k)
    insert_ranked(set, edge_key(path[k - 1], path[k]), label);
}

void validate(const BaseGraph& g, const OverlaySpec& spec, NodeIndex center) {
  if (center >= g.size())
    throw ConfigError("overlay center node " + std::to_string(center) + " is outside the graph");
  if (spec.n_bands < 1) throw ConfigError("overlay n_bands must be positive");
  if (spec.hubs_per_band < 1) throw ConfigError("overlay hubs_per_band must be positive");
  if (spec.min_hub_separation_hops < 0)
    throw ConfigError("overlay min_hub_separation_hops must be nonnegative");
  if (static_cast<std::size_t>(spec.n_bands) * static_cast<std::size_t>(spec.hubs_per_band) >=
      g.size())
    throw ConfigError("overlay n_bands * hubs_per_band must be smaller than the node count");
}

}  // namespace

std::string_view to_string(EdgeClass c) {
  switch (c) {
    case EdgeClass::backbone: return "backbone";
    case EdgeClass::feeder: return "feeder";
    case EdgeClass::metro: return "metro";
  }
  return "unknown";
}

std::pair<NodeIndex, NodeIndex> edge_key(NodeIndex a, NodeIndex b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

OverlayNetwork::OverlayNetwork(NodeIndex center, std::vector<NodeIndex> hubs,
                               bool hub_shortfall, std::vector<DirectedEdge> edges,
                               std::vector<int> potentials)
    : center_(center),
      hubs_(std::move(hubs)),
      is_hub_(potentials.size(), false),
      hub_shortfall_(hub_shortfall),
      edges_(std::move(edges)),
      offsets_(potentials.size() + 1, 0),
      potentials_(std::move(potentials)) {
  for (NodeIndex h : hubs_) is_hub_[h] = true;
  std::sort(edges_.begin(), edges_.end(), [](const DirectedEdge& a, const DirectedEdge& b) {
    return std::pair{a.src, a.dst} < std::pair{b.src, b.dst};
  });
  for (const auto& e : edges_) ++offsets_[e.src + 1];
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
}

std::span<const DirectedEdge> OverlayNetwork::out_edges(NodeIndex j) const {
  return std::span<const DirectedEdge>(edges_).subspan(offsets_[j], offsets_[j + 1] - offsets_[j]);
}

const DirectedEdge* OverlayNetwork::find_edge(NodeIndex src, NodeIndex dst) const {
  for (const auto& e : out_edges(src))
    if (e.dst == dst) return &e;
  return nullptr;
}

NodeIndex default_center(const BaseGraph& g) {
  NodeIndex best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (NodeIndex i = 0; i < g.size(); ++i) {
    const auto& p = g.cell(i).local;
    const double d = std::hypot(p.x, p.y);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

HubSelection select_hubs(const BaseGraph& g, const OverlaySpec& spec, NodeIndex center) {
  validate(g, spec, center);
  const std::size_t n = g.size();

  std::vector<double> radial(n);
  double r_max = 0.0;
  for (NodeIndex i = 0; i < n; ++i) {
    radial[i] = centroid_distance(g, center, i);
    r_max = std::max(r_max, radial[i]);
  }

  // Band k holds nodes with k * r_max / n_bands < d <= (k + 1) * r_max / n_bands.
  std::vector<std::vector<NodeIndex>> bands(spec.n_bands);
  for (NodeIndex i = 0; i < n; ++i) {
    if (i == center) continue;
    int band = static_cast<int>(std::ceil(radial[i] * spec.n_bands / r_max)) - 1;
    band = std::clamp(band, 0, spec.n_bands - 1);
    bands[band].push_back(i);
  }

  HubSelection out;
  std::vector<NodeIndex> anchors{center};  // farthest-first reference set
  std::vector<std::vector<int>> hub_bfs;
  std::vector<bool> taken(n, false);

  for (const auto& band : bands) {
    for (int pick = 0; pick < spec.hubs_per_band; ++pick) {
      NodeIndex best = 0;
      double best_score = -1.0;
      for (NodeIndex cand : band) {
        if (taken[cand]) continue;
        bool separated = true;
        for (const auto& d : hub_bfs) {
          if (d[cand] < spec.min_hub_separation_hops) {
            separated = false;
            break;
          }
        }
        if (!separated) continue;
        double score = std::numeric_limits<double>::infinity();
        for (NodeIndex a : anchors) score = std::min(score, centroid_distance(g, a, cand));
        if (score > best_score) {  // strict: ties keep the lowest index
          best_score = score;
          best = cand;
        }
      }
      if (best_score < 0.0) {
        out.shortfall = true;
        break;
      }
      taken[best] = true;
      anchors.push_back(best);
      hub_bfs.push_back(bfs_distances(g, best));
      out.hubs.push_back(best);
    }
  }
  std::sort(out.hubs.begin(), out.hubs.end());
  return out;
}

std::vector<NodeIndex> shortest_path(const BaseGraph& g, NodeIndex from, NodeIndex to) {
  return walk_down(g, bfs_distances(g, to), from);
}

EdgeSet build_backbone(const BaseGraph& g, std::span<const NodeIndex> hubs, NodeIndex center) {
  EdgeSet out;
  const auto dist = bfs_distances(g, center);
  for (NodeIndex h : hubs) add_path(out, walk_down(g, dist, h), {EdgeClass::backbone, false});
  return out;
}

EdgeSet build_feeders(const BaseGraph& g, std::span<const NodeIndex> hubs, NodeIndex center,
                      FeederMode mode) {
  EdgeSet out;
  if (hubs.empty()) return out;
  std::vector<std::vector<int>> dist;
  dist.reserve(hubs.size());
  for (NodeIndex h : hubs) dist.push_back(bfs_distances(g, h));

  std::vector<bool> is_hub(g.size(), false);
  for (NodeIndex h : hubs) is_hub[h] = true;

  std::vector<std::size_t> order(hubs.size());
  for (NodeIndex v = 0; v < g.size(); ++v) {
    if (is_hub[v] || v == center) continue;
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::pair{dist[a][v], hubs[a]} < std::pair{dist[b][v], hubs[b]};
    });
    add_path(out, walk_down(g, dist[order[0]], v), {EdgeClass::feeder, false});
    if (mode == FeederMode::multi && order.size() > 1)
      add_path(out, walk_down(g, dist[order[1]], v), {EdgeClass::feeder, true});
  }
  return out;
}

EdgeSet build_metro(const BaseGraph& g, std::span<const NodeIndex> hubs, NodeIndex center) {
  EdgeSet out;
  for (NodeIndex h : hubs) {
    const double rh = centroid_distance(g, center, h);
    NodeIndex best = h;
    double best_d = std::numeric_limits<double>::infinity();
    for (NodeIndex c : hubs) {
      if (c == h || !(centroid_distance(g, center, c) < rh)) continue;
      const double d = centroid_distance(g, h, c);
      if (d < best_d || (d == best_d && c < best)) {
        best_d = d;
        best = c;
      }
    }
    if (best != h) out.emplace(edge_key(h, best), EdgeLabel{EdgeClass::metro, false});
  }
  return out;
}

bool strongly_connected(std::size_t n, std::span<const DirectedEdge> edges) {
  if (n == 0) return true;
  std::vector<std::vector<NodeIndex>> fwd(n), rev(n);
  for (const auto& e : edges) {
    fwd[e.src].push_back(e.dst);
    rev[e.dst].push_back(e.src);
  }
  auto reaches_all = [n](const std::vector<std::vector<NodeIndex>>& adj) {
    std::vector<bool> seen(n, false);
    std::queue<NodeIndex> q;
    seen[0] = true;
    q.push(0);
    std::size_t count = 1;
    while (!q.empty()) {
      const NodeIndex u = q.front();
      q.pop();
      for (NodeIndex v : adj[u]) {
        if (seen[v]) continue;
        seen[v] = true;
        ++count;
        q.push(v);
      }
    }
    return count == n;
  };
  return reaches_all(fwd) && reaches_all(rev);
}

OverlayNetwork finalize(const BaseGraph& g, NodeIndex center, const HubSelection& hubs,
                        const EdgeSet& backbone, const EdgeSet& feeders, const EdgeSet& metro) {
  EdgeSet merged = feeders;
  for (const auto& [k, l] : backbone) insert_ranked(merged, k, l);
  for (const auto& [k, l] : metro) insert_ranked(merged, k, l);

  std::vector<int> psi = bfs_distances(g, center);
  std::vector<DirectedEdge> edges;
  edges.reserve(2 * merged.size());
  auto sign = [](int v) { return (v > 0) - (v < 0); };
  for (const auto& [key, label] : merged) {
    const auto [a, b] = key;
    edges.push_back({a, b, label.cls, label.secondary, sign(psi[a] - psi[b])});
    edges.push_back({b, a, label.cls, label.secondary, sign(psi[b] - psi[a])});
  }
  if (!strongly_connected(g.size(), edges))
    throw ConfigError("overlay construction error: network is not strongly connected");
  return OverlayNetwork(center, hubs.hubs, hubs.shortfall, std::move(edges), std::move(psi));
}

OverlayNetwork build_overlay(const BaseGraph& g, const OverlaySpec& spec) {
  const NodeIndex center = spec.center_node.value_or(default_center(g));
  const HubSelection hubs = select_hubs(g, spec, center);
  const EdgeSet backbone = build_backbone(g, hubs.hubs, center);
  const EdgeSet feeders = build_feeders(g, hubs.hubs, center, spec.feeder_mode);
  const EdgeSet metro = build_metro(g, hubs.hubs, center);
  return finalize(g, center, hubs, backbone, feeders, metro);
}

}  // namespace mobgen
