#include "mobgen/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "mobgen/errors.hpp"
#include "mobgen/io.hpp"
#include "mobgen/realize.hpp"

namespace mobgen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json stamp(json j, const RunConfig& c) {
  j["config_hash"] = config_hash(c);
  return j;
}

struct Model {
  Network net;
  std::vector<TransitionMatrix> day;
};

Model build_model(const RunConfig& c) {
  Model m{build_network(c), {}};
  const TransitionKernel kernel(m.net.grid, m.net.overlay, c.kernel, c.clock);
  m.day = kernel.build_day();
  return m;
}

FixedPointResult solve(const std::vector<TransitionMatrix>& day) {
  return fixed_point(compose_day(day));
}

}  // namespace

Network build_network(const RunConfig& c) {
  c.validate();
  BaseGraph grid = build_grid(c.grid);
  OverlayNetwork overlay = build_overlay(grid, c.overlay);
  return {std::move(grid), std::move(overlay)};
}

std::string network_hash(const Network& net) {
  std::string text;
  for (const auto& cell : net.grid.cells())
    text += cell.id + ':' + format_double(cell.centroid.lat) + ',' + format_double(cell.centroid.lon) + ';';
  for (const auto& e : net.overlay.edges())
    text += std::to_string(e.src) + '>' + std::to_string(e.dst) + ':' + std::string(to_string(e.cls)) +
            (e.secondary ? "/2" : "") + ':' + std::to_string(e.sign) + ';';
  return fnv1a_hex(text);
}

BuildSummary cmd_build(const RunConfig& c, const fs::path& out, std::ostream& log) {
  const Network net = build_network(c);
  const auto& g = net.grid;
  const auto& o = net.overlay;

  json nodes = json::array();
  for (NodeIndex i = 0; i < g.size(); ++i) {
    const Cell& cell = g.cell(i);
    nodes.push_back({{"index", i},
                     {"id", cell.id},
                     {"lat", cell.centroid.lat},
                     {"lon", cell.centroid.lon},
                     {"q", cell.axial.q},
                     {"r", cell.axial.r},
                     {"potential", o.potential(i)},
                     {"hub", o.is_hub(i)}});
  }
  json edges = json::array();
  for (const auto& e : o.edges())
    edges.push_back({{"src", e.src},
                     {"dst", e.dst},
                     {"class", std::string(to_string(e.cls))},
                     {"secondary", e.secondary},
                     {"sigma", e.sign}});

  BuildSummary s{g.size(), o.edges().size(), network_hash(net)};
  write_json(out / "manifest.json", stamp({{"network_hash", s.network_hash},
                                           {"node_count", s.node_count},
                                           {"directed_edge_count", s.edge_count},
                                           {"center", o.center()},
                                           {"hubs", o.hubs()},
                                           {"hub_shortfall", o.hub_shortfall()},
                                           {"pitch_km", g.pitch_km()},
                                           {"hex_diameter_km", g.hex_diameter_km()},
                                           {"nodes", nodes},
                                           {"edges", edges}},
                                          c));
  write_json(out / "grid.geojson", stamp(grid_geojson(g), c));
  write_json(out / "overlay.geojson", stamp(overlay_geojson(g, o, c.kernel.class_weights), c));

  log << "nodes " << s.node_count << ", directed edges " << s.edge_count << ", hubs "
      << o.hubs().size() << (o.hub_shortfall() ? " (shortfall)" : "") << ", network hash "
      << s.network_hash << '\n';
  return s;
}

FixedPointResult cmd_fixed_point(const RunConfig& c, const fs::path& out, bool write_matrices,
                                 std::ostream& log) {
  const Model m = build_model(c);
  const DailyMatrix q = compose_day(m.day);
  const FixedPointResult fp = fixed_point(q);
  const auto& p = fp.p.p;

  {
    auto f = open_output(out / "pstar.csv");
    write_population(f, m.net.grid, p);
  }
  write_json(out / "pstar.geojson", stamp(population_geojson(m.net.grid, p), c));
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  write_json(out / "fixed_point.json",
             stamp({{"residual_l1", fp.residual},
                    {"iterations", fp.iterations},
                    {"sum", total},
                    {"min", *std::min_element(p.begin(), p.end())},
                    {"max", *std::max_element(p.begin(), p.end())},
                    {"node_count", p.size()}},
                   c));

  if (write_matrices) {
    for (const auto& mt : m.day) {
      auto f = open_output(out / "matrices" / ("M_" + std::to_string(mt.t) + ".csv"));
      write_matrix(f, mt.entries);
    }
    auto f = open_output(out / "matrices" / "Q.csv");
    write_matrix(f, q.q);
    json ids = json::array();
    for (const auto& cell : m.net.grid.cells()) ids.push_back(cell.id);
    write_json(out / "matrices" / "matrices.json",
               stamp({{"T", m.day.size()}, {"N", p.size()}, {"node_ids", ids},
                      {"layout", "row i, column j holds P(j -> i)"}},
                     c));
  }

  log << "fixed point: " << fp.iterations << " iterations, residual " << fp.residual << ", sum "
      << total << '\n';
  return fp;
}

SimulateSummary cmd_simulate(const RunConfig& c, const fs::path& out, int od_window_steps,
                             std::ostream& log) {
  if (od_window_steps < 1) throw ConfigError("--od-window must be at least 1");
  const Model m = build_model(c);
  const FixedPointResult fp = solve(m.day);

  auto traj = open_output(out / "trajectories.csv");
  auto od = open_output(out / "od.csv");
  auto flows = open_output(out / "flows.csv");
  traj << kHopsHeader << '\n';
  od << kOdHeader << '\n';
  flows << kFlowsHeader << '\n';

  SimulateSummary s;
  std::vector<HopRecord> pending;  // hops of the OD bucket being filled
  std::vector<EdgeFlow> all_flows;
  auto flush_od = [&] {
    const auto rows = aggregate_od(pending, od_window_steps);
    write_od(od, rows);
    s.od_rows += rows.size();
    pending.clear();
  };

  realize(c.sim, m.day, fp.p, m.net.grid, c.clock, [&](std::span<const HopRecord> batch) {
    if (batch.empty()) return;
    write_hops(traj, batch);
    s.records += batch.size();
    const int t = batch.front().t;
    const auto f = edge_flows(batch, m.net.overlay, t);
    write_flows(flows, f);
    all_flows.insert(all_flows.end(), f.begin(), f.end());
    pending.insert(pending.end(), batch.begin(), batch.end());
    if ((t - c.sim.window.start + 1) % od_window_steps == 0) flush_od();
  });
  if (!pending.empty()) flush_od();
  s.flow_rows = all_flows.size();
  for (auto* f : {&traj, &od, &flows})
    if (!*f) throw IoError("write failed in '" + out.string() + "'");

  const json bins = bin_index(c.start_date, c.clock, c.sim.window);
  const json common = {{"seed", c.sim.seed},
                       {"K", c.sim.pep_count},
                       {"window", {c.sim.window.start, c.sim.window.end}},
                       {"step_minutes", c.clock.step_minutes},
                       {"bins", bins}};
  json tj = common;
  tj["records"] = s.records;
  tj["self_hops"] = "included";
  write_json(out / "trajectories.json", stamp(tj, c));
  json oj = common;
  oj["od_window_steps"] = od_window_steps;
  oj["std_convention"] = "population (divide by n)";
  oj["median_convention"] = "mean of the two middle values for even counts";
  write_json(out / "od.json", stamp(oj, c));
  json fj = common;
  fj["orientation"] = "src is the outer endpoint, dst the inner; inward counts src -> dst hops";
  fj["excluded"] = "self-hops and equal-potential edges";
  write_json(out / "flows.json", stamp(fj, c));
  write_json(out / "flows.geojson", stamp(flows_geojson(m.net.grid, all_flows), c));

  log << "simulated " << c.sim.pep_count << " PEPs over steps [" << c.sim.window.start << ", "
      << c.sim.window.end << "): " << s.records << " hops, " << s.od_rows << " OD rows, "
      << s.flow_rows << " flow rows\n";
  return s;
}

VerificationReport cmd_verify(const RunConfig& c, const fs::path& out, std::ostream& log) {
  const json side = read_json(out / "trajectories.json");
  const std::string expected = config_hash(c);
  if (side.value("config_hash", std::string{}) != expected)
    throw DataError("trajectories.json was produced by config " +
                    side.value("config_hash", std::string{"<none>"}) + ", current config is " +
                    expected);
  const StepWindow sim_window{side.at("window").at(0).get<int>(), side.at("window").at(1).get<int>()};
  const StepWindow window = c.verify_window.value_or(sim_window);
  if (window.start < sim_window.start || window.end > sim_window.end)
    throw DataError("verify window [" + std::to_string(window.start) + ", " +
                    std::to_string(window.end) + ") is not covered by the trajectories [" +
                    std::to_string(sim_window.start) + ", " + std::to_string(sim_window.end) + ")");

  const Model m = build_model(c);
  const std::size_t n = m.net.grid.size();
  EmpiricalEstimator est(n, window);
  {
    auto in = open_input(out / "trajectories.csv");
    read_hops(in, [&](const HopRecord& h) { est.add(h); });
  }
  const EmpiricalResult emp = est.finish();
  const DenseMatrix a_prod = compose_window(m.day, window);
  VerificationReport r = metrics(emp.a_pep, a_prod, emp.origin_mass);
  r.window = window;

  json j = report_to_json(r);
  j["seed"] = side.at("seed");
  j["window_start"] = window.start < window.end ? iso_bin_start(c.start_date, c.clock, window.start) : "";
  write_json(out / "report.json", stamp(j, c));

  char line[256];
  log << "window [" << window.start << ", " << window.end << "), K = " << r.pep_count
      << ", N = " << r.node_count << "\n";
  std::snprintf(line, sizeof line, "%-14s %12s %12s %14s %14s %12s %14s %12s\n", "", "L1", "RMSE",
                "mean col L1", "mean col JS", "wtd L1", "wtd RMSE", "wtd JS");
  log << line;
  std::snprintf(line, sizeof line, "%-14s %12.4f %12.4e %14.5f %14.4e %12.5f %14.4e %12.4e\n",
                ("K=" + std::to_string(r.pep_count)).c_str(), r.l1_norm, r.rmse, r.mean_col_l1,
                r.mean_col_js, r.weighted_l1, r.weighted_rmse, r.weighted_js);
  log << line;
  return r;
}

FlowDirection parse_direction(const std::string& s) {
  if (s == "inward") return FlowDirection::inward;
  if (s == "outward") return FlowDirection::outward;
  if (s == "net") return FlowDirection::net;
  throw ConfigError("direction must be inward, outward or net, got '" + s + "'");
}

std::int64_t cmd_flows(const RunConfig& c, const fs::path& out, FlowDirection dir, int t,
                       std::ostream& log) {
  const json side = read_json(out / "flows.json");
  if (side.value("config_hash", std::string{}) != config_hash(c))
    throw DataError("flows.json was produced by a different config");
  const int w0 = side.at("window").at(0).get<int>();
  const int w1 = side.at("window").at(1).get<int>();
  if (t < w0 || t >= w1)
    throw DataError("step " + std::to_string(t) + " is outside the simulated window [" +
                    std::to_string(w0) + ", " + std::to_string(w1) + ")");

  std::vector<EdgeFlow> rows;
  {
    auto in = open_input(out / "flows.csv");
    for (const auto& f : read_flows(in))
      if (f.t == t) rows.push_back(f);
  }
  const Network net = build_network(c);
  json gj = flows_geojson(net.grid, rows);
  const char* name = dir == FlowDirection::inward ? "inward" : dir == FlowDirection::outward ? "outward" : "net";
  std::int64_t total = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& f = rows[k];
    const std::int64_t v = dir == FlowDirection::inward    ? static_cast<std::int64_t>(f.inward)
                           : dir == FlowDirection::outward ? static_cast<std::int64_t>(f.outward)
                                                           : f.net;
    gj["features"][k]["properties"]["value"] = v;
    total += v;
  }
  gj["properties"] = {{"direction", name}, {"t", t}, {"start", iso_bin_start(c.start_date, c.clock, t)}};
  write_json(out / ("flows_" + std::string(name) + "_t" + std::to_string(t) + ".geojson"), stamp(gj, c));
  log << name << " flow at t=" << t << " (" << iso_bin_start(c.start_date, c.clock, t)
      << "): " << total << " over " << rows.size() << " edges\n";
  return total;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DataError*>(&e)) return 2;
  if (dynamic_cast<const NumericError*>(&e)) return 3;
  if (dynamic_cast<const IoError*>(&e)) return 4;
  return 1;
}

}  // namespace mobgen
