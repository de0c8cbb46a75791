// mobgen: build the synthetic network, solve for the daily fixed point,
// realize PEP trajectories and verify them against the matrix model.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mobgen/commands.hpp"
#include "mobgen/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic population mobility generator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> pep_count;
  std::optional<std::string> out_dir;
  app.add_option("--config", config_path, "run config (JSON); built-in default when omitted");
  app.add_option("--seed", seed, "override sim.seed");
  app.add_option("--pep-count", pep_count, "override sim.pep_count (K)");
  app.add_option("--out", out_dir, "output directory (default: config output_dir)");

  auto* build = app.add_subcommand("build", "write grid, overlay and network manifest");
  auto* fixed = app.add_subcommand("fixed-point", "solve the periodic fixed point p*");
  bool write_matrices = false;
  fixed->add_flag("--matrices", write_matrices, "also write every M_t and Q as CSV");
  auto* simulate = app.add_subcommand("simulate", "realize trajectories, OD summaries and flows");
  int od_window = 1;
  simulate->add_option("--od-window,--window", od_window, "steps pooled per OD row")->check(CLI::PositiveNumber);
  auto* verify = app.add_subcommand("verify", "compare trajectories with the composed matrices");
  auto* flows = app.add_subcommand("flows", "export one step of directional edge flows");
  std::string direction = "net";
  std::string t_text;
  flows->add_option("--direction", direction, "inward, outward or net")
      ->check(CLI::IsMember({"inward", "outward", "net"}));
  flows->add_option("--t", t_text, "time-step index or HH:MM")->required();
  auto* dump = app.add_subcommand("config", "print the resolved config as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    mobgen::RunConfig c =
        config_path.empty() ? mobgen::paper_default_config() : mobgen::load_config(config_path);
    if (seed) c.sim.seed = *seed;
    if (pep_count) c.sim.pep_count = *pep_count;
    if (out_dir) c.output_dir = *out_dir;
    c.validate();
    const std::filesystem::path out = c.output_dir;

    if (*build) {
      mobgen::cmd_build(c, out, std::cout);
    } else if (*fixed) {
      mobgen::cmd_fixed_point(c, out, write_matrices, std::cout);
    } else if (*simulate) {
      mobgen::cmd_simulate(c, out, od_window, std::cout);
    } else if (*verify) {
      mobgen::cmd_verify(c, out, std::cout);
    } else if (*flows) {
      const bool numeric = !t_text.empty() && t_text.find_first_not_of("0123456789") == std::string::npos;
      const nlohmann::json t_json = numeric ? nlohmann::json(std::stoi(t_text)) : nlohmann::json(t_text);
      mobgen::cmd_flows(c, out, mobgen::parse_direction(direction),
                        mobgen::parse_step(t_json, c.clock), std::cout);
    } else if (*dump) {
      std::cout << mobgen::to_json(c).dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "mobgen: " << e.what() << '\n';
    return mobgen::exit_code_for(e);
  }
  return 0;
}
