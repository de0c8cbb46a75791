#pragma once

// Pipeline stages behind the CLI subcommands. Each stage rebuilds what it
// needs from the config deterministically and writes its artifacts under
// `out`; every JSON artifact carries the config hash.

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mobgen/aggregate.hpp"
#include "mobgen/config.hpp"
#include "mobgen/evolution.hpp"
#include "mobgen/grid.hpp"
#include "mobgen/kernel.hpp"
#include "mobgen/overlay.hpp"
#include "mobgen/verify.hpp"

namespace mobgen {

struct Network {
  BaseGraph grid;
  OverlayNetwork overlay;
};

Network build_network(const RunConfig& c);
/// Hash over node order, centroids and labeled edges.
std::string network_hash(const Network& net);

struct BuildSummary {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::string network_hash;
};
BuildSummary cmd_build(const RunConfig& c, const std::filesystem::path& out, std::ostream& log);

/// Writes pstar.csv, pstar.geojson, fixed_point.json and, with
/// `write_matrices`, matrices/M_<t>.csv plus matrices/Q.csv.
FixedPointResult cmd_fixed_point(const RunConfig& c, const std::filesystem::path& out,
                                 bool write_matrices, std::ostream& log);

struct SimulateSummary {
  std::uint64_t records = 0;
  std::size_t od_rows = 0;
  std::size_t flow_rows = 0;
};
/// Streams trajectories.csv step by step and writes od.csv and flows.csv
/// (with JSON sidecars) plus flows.geojson. `od_window_steps` pools that many
/// consecutive steps per OD row.
SimulateSummary cmd_simulate(const RunConfig& c, const std::filesystem::path& out,
                             int od_window_steps, std::ostream& log);

/// Re-reads trajectories.csv, checks its sidecar hash against `c`, and
/// writes report.json. Uses c.verify_window, else the simulated window.
VerificationReport cmd_verify(const RunConfig& c, const std::filesystem::path& out, std::ostream& log);

enum class FlowDirection { inward, outward, net };
FlowDirection parse_direction(const std::string& s);

/// Selects one step of flows.csv and writes flows_<direction>_t<t>.geojson
/// with a `value` property. Returns the summed value.
std::int64_t cmd_flows(const RunConfig& c, const std::filesystem::path& out, FlowDirection dir,
                       int t, std::ostream& log);

/// 0 success, 2 config or input validation, 3 numeric failure, 4 I/O, 1 other.
int exit_code_for(const std::exception& e);

}  // namespace mobgen
