#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "mobgen/grid.hpp"
#include "mobgen/kernel.hpp"
#include "mobgen/overlay.hpp"
#include "mobgen/realize.hpp"
#include "mobgen/schedule.hpp"

namespace mobgen {

/// Everything one pipeline run needs. Serialized as JSON; see
/// configs/paper_default.json for the full layout.
struct RunConfig {
  std::string name = "paper_default";
  std::string start_date = "2025-06-01";  // calendar day of step 0
  GridConfig grid;
  OverlaySpec overlay;
  KernelParams kernel;
  DayClock clock;
  SimConfig sim;
  std::optional<StepWindow> verify_window;
  std::string output_dir = "out";

  /// Throws ConfigError on the first inconsistency found.
  void validate() const;
};

/// Built-in default: 99-node resolution-6 disc, 30-minute steps, 3 bands x 2
/// hubs, single feeders, morning inward / evening outward bias.
RunConfig paper_default_config();

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical JSON (schedule times as HH:MM, windows as step indices).
nlohmann::json to_json(const RunConfig& c);

/// 16-hex-digit FNV-1a hash of the canonical JSON.
std::string config_hash(const RunConfig& c);

std::string fnv1a_hex(std::string_view data);

/// Parses a time spec: "HH:MM" snapped to the nearest step, or an integer step.
int parse_step(const nlohmann::json& v, const DayClock& clock);

}  // namespace mobgen
