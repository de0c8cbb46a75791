// Drives the mobgen executable end to end in a scratch directory.
#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "mobgen/io.hpp"
#include "support.hpp"

using namespace mobgen;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + MOBGEN_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Small 20-node config so every run is quick.
fs::path write_small_config(const fs::path& dir, std::uint64_t k) {
  RunConfig c = test::small_config(20);
  c.sim.pep_count = k;
  const fs::path p = dir / "small.json";
  write_json(p, to_json(c));
  return p;
}

struct Workspace {
  test::TempDir dir{"cli"};
  fs::path config = write_small_config(dir.path(), 400);
  fs::path log = dir.path() / "log.txt";
  int operator()(const std::string& args, const std::string& out = "out") {
    return run("--config \"" + config.string() + "\" --out \"" + (dir.path() / out).string() + "\" " + args, log);
  }
  fs::path at(const std::string& rel) const { return dir.path() / rel; }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("build writes a stable manifest") {
  Workspace w;
  REQUIRE(w("build") == 0);
  REQUIRE(w("build", "again") == 0);
  const auto a = read_json(w.at("out/manifest.json")), b = read_json(w.at("again/manifest.json"));
  CHECK(a.at("network_hash") == b.at("network_hash"));
  CHECK(a.at("node_count") == 20);
  CHECK(fs::exists(w.at("out/grid.geojson")));
  CHECK(fs::exists(w.at("out/overlay.geojson")));
}

TEST_CASE("fixed-point writes p* and optional matrices") {
  Workspace w;
  REQUIRE(w("fixed-point --matrices") == 0);
  const auto fp = read_json(w.at("out/fixed_point.json"));
  CHECK(fp.at("residual_l1").get<double>() <= 1e-12);
  CHECK(fs::exists(w.at("out/pstar.csv")));
  CHECK(fs::exists(w.at("out/matrices/Q.csv")));
  CHECK(fs::exists(w.at("out/matrices/M_47.csv")));
}

TEST_CASE("simulate is deterministic and self-consistent") {
  Workspace w;
  REQUIRE(w("simulate") == 0);
  REQUIRE(w("simulate", "b") == 0);
  REQUIRE(w("--seed 99 simulate", "c") == 0);
  const std::string traj = test::slurp(w.at("out/trajectories.csv"));
  CHECK(traj == test::slurp(w.at("b/trajectories.csv")));
  CHECK(traj != test::slurp(w.at("c/trajectories.csv")));

  const auto hops = read_hops_file(w.at("out/trajectories.csv"));
  CHECK(hops.size() == 400u * 8u);

  // OD rows recomputed from the trajectory file match the emitted file byte for byte.
  std::ostringstream od;
  od << kOdHeader << '\n';
  write_od(od, aggregate_od(hops));
  CHECK(od.str() == test::slurp(w.at("out/od.csv")));

  std::ifstream od_in(w.at("out/od.csv"));
  std::map<int, std::uint64_t> per_t;
  for (const auto& r : read_od(od_in)) per_t[r.t] += r.trips;
  CHECK(per_t.size() == 8);
  for (const auto& [t, k] : per_t) CHECK(k == 400);

  const auto side = read_json(w.at("out/trajectories.json"));
  CHECK(side.at("bins").size() == 8);
  CHECK(side.at("bins")[0].at("start") == "2025-06-01T06:00:00");

  SUBCASE("pooled OD windows") {
    REQUIRE(w("simulate --od-window 2", "pooled") == 0);
    std::ostringstream pooled;
    pooled << kOdHeader << '\n';
    write_od(pooled, aggregate_od(read_hops_file(w.at("pooled/trajectories.csv")), 2));
    CHECK(pooled.str() == test::slurp(w.at("pooled/od.csv")));
    CHECK(w("simulate --window 2", "alias") == 0);
    CHECK(test::slurp(w.at("alias/od.csv")) == test::slurp(w.at("pooled/od.csv")));
  }
}

TEST_CASE("verify, flows and error exits") {
  Workspace w;
  REQUIRE(w("simulate") == 0);
  REQUIRE(w("verify") == 0);
  const auto report = report_from_json(read_json(w.at("out/report.json")));
  CHECK(report.pep_count == 400);
  CHECK(report.node_count == 20);
  CHECK(report.window == StepWindow{12, 18});
  CHECK(report.l1_norm > 0.0);
  CHECK(test::slurp(w.log).find("wtd JS") != std::string::npos);

  REQUIRE(w("flows --direction inward --t 09:00") == 0);
  const auto geo = read_json(w.at("out/flows_inward_t18.geojson"));
  CHECK_FALSE(geo.at("features").empty());
  CHECK(w("flows --direction net --t 18") == 0);

  CHECK(w("flows --t 05:00") == 2);     // outside the simulated window
  CHECK(w("flows --t 9am") == 2);
  CHECK(w("--seed 5 verify") == 2);     // trajectories belong to another config
  CHECK(test::slurp(w.log).find("config") != std::string::npos);
  CHECK(run("--config \"" + w.at("nope.json").string() + "\" build", w.log) == 4);
  CHECK(run("", w.log) != 0);

  {
    auto out = open_output(w.at("overlap.json"));
    out << R"({"kernel": {"metro": {"baseline": 1, "ramps": [["06:00", "09:00", 2], ["08:00", "10:00", 1]]}}})";
  }
  CHECK(run("--config \"" + w.at("overlap.json").string() + "\" build", w.log) == 2);
  const std::string msg = test::slurp(w.log);
  CHECK(msg.find("(06:00, 09:00, 2)") != std::string::npos);
  CHECK(msg.find("(08:00, 10:00, 1)") != std::string::npos);
}

// The renderer consumes only these files; layer sizes must match the manifest.
TEST_CASE("exports agree with the manifest") {
  Workspace w;
  REQUIRE(w("build") == 0);
  REQUIRE(w("fixed-point") == 0);
  REQUIRE(w("simulate") == 0);
  REQUIRE(w("flows --direction net --t 18") == 0);
  const auto manifest = read_json(w.at("out/manifest.json"));
  const std::size_t nodes = manifest.at("node_count"), edges = manifest.at("directed_edge_count");

  auto count = [](const nlohmann::json& fc, const std::string& geometry) {
    std::size_t n = 0;
    for (const auto& f : fc.at("features")) n += f.at("geometry").at("type") == geometry;
    return n;
  };
  CHECK(count(read_json(w.at("out/grid.geojson")), "Polygon") == nodes);
  CHECK(count(read_json(w.at("out/grid.geojson")), "Point") == nodes);
  CHECK(count(read_json(w.at("out/overlay.geojson")), "LineString") == edges);

  const auto pstar = read_json(w.at("out/pstar.geojson"));
  CHECK(count(pstar, "Polygon") == nodes);
  double total = 0.0;
  for (const auto& f : pstar.at("features")) total += f.at("properties").at("population").get<double>();
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  const auto net = read_json(w.at("out/flows_net_t18.geojson"));
  std::ifstream flows_in(w.at("out/flows.csv"));
  std::int64_t expected = 0;
  for (const auto& f : read_flows(flows_in))
    if (f.t == 18) expected += f.net;
  std::int64_t got = 0;
  for (const auto& f : net.at("features")) got += f.at("properties").at("value").get<std::int64_t>();
  CHECK(got == expected);
}

TEST_CASE("an empty verify window gives all-zero metrics") {
  Workspace w;
  RunConfig c = test::small_config(20);
  c.sim.pep_count = 200;
  c.verify_window = StepWindow{12, 12};
  write_json(w.config, to_json(c));
  REQUIRE(w("simulate") == 0);
  REQUIRE(w("verify") == 0);
  const auto r = report_from_json(read_json(w.at("out/report.json")));
  CHECK(r.l1_norm == 0.0);
  CHECK(r.rmse == 0.0);
  CHECK(r.mean_col_js == 0.0);
  CHECK(r.weighted_js == 0.0);
}

TEST_CASE("config subcommand prints the resolved config") {
  Workspace w;
  REQUIRE(w("--pep-count 77 config") == 0);
  const auto j = nlohmann::json::parse(test::slurp(w.log));
  CHECK(j.at("sim").at("pep_count") == 77);
}

}  // TEST_SUITE
