#include "mobgen/config.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>

#include "mobgen/errors.hpp"

namespace mobgen {

using nlohmann::json;

namespace {

const DayClock kDefaultClock{48, 30.0};

int at(const char* hhmm) { return kDefaultClock.step_of_minutes(parse_hhmm(hhmm)); }

RampSchedule sched(double baseline, std::initializer_list<std::tuple<const char*, const char*, double>> ramps) {
  std::vector<Ramp> out;
  for (const auto& [s, e, v] : ramps) out.push_back({at(s), at(e), v});
  return RampSchedule(baseline, std::move(out));
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

RampSchedule parse_schedule(const json& j, const DayClock& clock, const std::string& where) {
  if (j.is_number()) return RampSchedule::constant(j.get<double>());
  reject_unknown(j, {"baseline", "ramps"}, where);
  double baseline = 1.0;
  read(j, "baseline", baseline, where);
  std::vector<Ramp> ramps;
  if (j.contains("ramps")) {
    for (const auto& r : j.at("ramps")) {
      if (!r.is_array() || r.size() != 3 || !r[2].is_number())
        throw ConfigError(where + ": each ramp must be [start, end, value]");
      ramps.push_back({parse_step(r[0], clock), parse_step(r[1], clock), r[2].get<double>()});
    }
  }
  return RampSchedule(baseline, std::move(ramps));
}

json schedule_json(const RampSchedule& s, const DayClock& clock) {
  json ramps = json::array();
  for (const auto& r : s.ramps())
    ramps.push_back({format_hhmm(r.start * clock.step_minutes),
                     format_hhmm(r.end * clock.step_minutes), r.value});
  return {{"baseline", s.baseline()}, {"ramps", ramps}};
}

StepWindow parse_window(const json& j, const DayClock& clock, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(where + ": expected [start, end]");
  return {parse_step(j[0], clock), parse_step(j[1], clock)};
}

}  // namespace

int parse_step(const json& v, const DayClock& clock) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_string()) return clock.step_of_minutes(parse_hhmm(v.get<std::string>()));
  throw ConfigError("time must be \"HH:MM\" or an integer step, got " + v.dump());
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void RunConfig::validate() const {
  clock.validate();
  if (!(grid.radius_km > 0.0)) throw ConfigError("grid radius_km must be positive");
  pitch_for_resolution(grid.resolution);
  kernel.validate(clock);
  sim.validate();
  if (verify_window) {
    if (verify_window->start < 0 || verify_window->end < verify_window->start)
      throw ConfigError("verify_window must satisfy 0 <= start <= end");
    if (verify_window->start < sim.window.start || verify_window->end > sim.window.end)
      throw ConfigError("verify_window must lie inside the simulation window");
  }
  if (start_date.size() != 10) throw ConfigError("start_date must be YYYY-MM-DD");
}

RunConfig paper_default_config() {
  RunConfig c;
  c.clock = kDefaultClock;
  c.grid = GridConfig{33.749, -84.388, 33.56, 6, 0.966, 2.576};
  c.overlay = OverlaySpec{std::nullopt, 3, 2, 2, FeederMode::single};

  KernelParams& k = c.kernel;
  k.alpha = 1.0;
  k.beta = 2.0;
  k.stay.center = sched(0.75, {{"07:00", "09:00", 0.85}, {"16:00", "18:00", 0.75}});
  k.stay.periphery = sched(0.85, {{"05:30", "07:30", 0.65},
                                  {"10:00", "12:00", 0.85},
                                  {"15:30", "17:30", 0.65},
                                  {"20:00", "22:00", 0.85}});
  k.mass.center = sched(1.0, {{"06:00", "09:00", 3.0}, {"16:00", "19:00", 1.0}});
  k.mass.periphery = RampSchedule::constant(1.0);
  k.hub_stay_factor = RampSchedule::constant(1.0);
  k.hub_mass_factor = RampSchedule::constant(1.5);
  k.metro = sched(1.0, {{"06:00", "08:00", 2.0}, {"18:00", "20:00", 1.0}});
  k.bias.inward = sched(1.0, {{"06:00", "11:00", 5.0}, {"15:00", "20:00", 1.0}});
  k.bias.outward = sched(1.0, {{"15:00", "18:00", 3.0}, {"20:00", "23:00", 1.0}});
  k.bias.neutral = RampSchedule::constant(1.0);
  k.k = RampSchedule::constant(1.0);

  c.sim.pep_count = 120000;
  c.sim.window = {at("06:00"), at("10:00")};
  c.sim.seed = 20250601;
  c.verify_window = StepWindow{at("06:00"), at("09:00")};
  return c;
}

RunConfig parse_config(const json& j) {
  RunConfig c = paper_default_config();
  reject_unknown(j, {"name", "start_date", "clock", "grid", "overlay", "kernel", "sim",
                     "verify_window", "output_dir"},
                 "config");
  read(j, "name", c.name, "config");
  read(j, "start_date", c.start_date, "config");
  read(j, "output_dir", c.output_dir, "config");

  if (j.contains("clock")) {
    const auto& s = j.at("clock");
    reject_unknown(s, {"steps_per_day", "step_minutes"}, "clock");
    read(s, "steps_per_day", c.clock.steps_per_day, "clock");
    read(s, "step_minutes", c.clock.step_minutes, "clock");
  }
  c.clock.validate();

  if (j.contains("grid")) {
    const auto& s = j.at("grid");
    reject_unknown(s, {"center_lat", "center_lon", "radius_km", "resolution", "lattice_offset_km"},
                   "grid");
    read(s, "center_lat", c.grid.center_lat, "grid");
    read(s, "center_lon", c.grid.center_lon, "grid");
    read(s, "radius_km", c.grid.radius_km, "grid");
    read(s, "resolution", c.grid.resolution, "grid");
    if (s.contains("lattice_offset_km")) {
      const auto& o = s.at("lattice_offset_km");
      if (!o.is_array() || o.size() != 2) throw ConfigError("grid.lattice_offset_km: expected [east, north]");
      c.grid.lattice_offset_east_km = o[0].get<double>();
      c.grid.lattice_offset_north_km = o[1].get<double>();
    }
  }

  if (j.contains("overlay")) {
    const auto& s = j.at("overlay");
    reject_unknown(s, {"center_node", "n_bands", "hubs_per_band", "min_hub_separation_hops",
                       "feeder_mode"},
                   "overlay");
    if (s.contains("center_node") && !s.at("center_node").is_null())
      c.overlay.center_node = s.at("center_node").get<NodeIndex>();
    read(s, "n_bands", c.overlay.n_bands, "overlay");
    read(s, "hubs_per_band", c.overlay.hubs_per_band, "overlay");
    read(s, "min_hub_separation_hops", c.overlay.min_hub_separation_hops, "overlay");
    if (s.contains("feeder_mode")) {
      const auto mode = s.at("feeder_mode").get<std::string>();
      if (mode == "single")
        c.overlay.feeder_mode = FeederMode::single;
      else if (mode == "multi")
        c.overlay.feeder_mode = FeederMode::multi;
      else
        throw ConfigError("overlay.feeder_mode must be 'single' or 'multi'");
    }
  }

  if (j.contains("kernel")) {
    const auto& s = j.at("kernel");
    reject_unknown(s, {"alpha", "beta", "center_class_max_potential", "stay_clamp", "class_weights",
                       "stay", "mass", "hub_stay_factor", "hub_mass_factor", "metro", "bias", "k",
                       "node_mass_scale"},
                   "kernel");
    KernelParams& k = c.kernel;
    read(s, "alpha", k.alpha, "kernel");
    read(s, "beta", k.beta, "kernel");
    read(s, "center_class_max_potential", k.center_class_max_potential, "kernel");
    read(s, "node_mass_scale", k.node_mass_scale, "kernel");
    if (s.contains("stay_clamp")) {
      const auto& cl = s.at("stay_clamp");
      if (!cl.is_array() || cl.size() != 2) throw ConfigError("kernel.stay_clamp: expected [min, max]");
      k.stay_min = cl[0].get<double>();
      k.stay_max = cl[1].get<double>();
    }
    if (s.contains("class_weights")) {
      const auto& w = s.at("class_weights");
      reject_unknown(w, {"backbone", "feeder", "metro", "secondary_feeder_multiplier"},
                     "kernel.class_weights");
      read(w, "backbone", k.class_weights.backbone, "kernel.class_weights");
      read(w, "feeder", k.class_weights.feeder, "kernel.class_weights");
      read(w, "metro", k.class_weights.metro, "kernel.class_weights");
      read(w, "secondary_feeder_multiplier", k.class_weights.secondary_feeder_multiplier,
           "kernel.class_weights");
    }
    auto node_classes = [&](const char* key, NodeClassSchedules& out) {
      if (!s.contains(key)) return;
      const auto& n = s.at(key);
      const std::string where = std::string("kernel.") + key;
      reject_unknown(n, {"center", "periphery"}, where);
      if (n.contains("center")) out.center = parse_schedule(n.at("center"), c.clock, where + ".center");
      if (n.contains("periphery"))
        out.periphery = parse_schedule(n.at("periphery"), c.clock, where + ".periphery");
    };
    node_classes("stay", k.stay);
    node_classes("mass", k.mass);
    auto single = [&](const char* key, RampSchedule& out) {
      if (s.contains(key)) out = parse_schedule(s.at(key), c.clock, std::string("kernel.") + key);
    };
    single("hub_stay_factor", k.hub_stay_factor);
    single("hub_mass_factor", k.hub_mass_factor);
    single("metro", k.metro);
    single("k", k.k);
    if (s.contains("bias")) {
      const auto& b = s.at("bias");
      reject_unknown(b, {"inward", "outward", "neutral"}, "kernel.bias");
      if (b.contains("inward")) k.bias.inward = parse_schedule(b.at("inward"), c.clock, "kernel.bias.inward");
      if (b.contains("outward")) k.bias.outward = parse_schedule(b.at("outward"), c.clock, "kernel.bias.outward");
      if (b.contains("neutral")) k.bias.neutral = parse_schedule(b.at("neutral"), c.clock, "kernel.bias.neutral");
    }
  }

  if (j.contains("sim")) {
    const auto& s = j.at("sim");
    reject_unknown(s, {"pep_count", "window", "seed", "attribute", "speed"}, "sim");
    read(s, "pep_count", c.sim.pep_count, "sim");
    read(s, "seed", c.sim.seed, "sim");
    read(s, "attribute", c.sim.attribute, "sim");
    if (s.contains("window")) c.sim.window = parse_window(s.at("window"), c.clock, "sim.window");
    if (s.contains("speed")) {
      const auto& v = s.at("speed");
      reject_unknown(v, {"family", "mean_kmh", "sd_kmh", "min_kmh", "max_kmh"}, "sim.speed");
      if (v.contains("family") && v.at("family") != "truncated_normal")
        throw ConfigError("sim.speed.family: only 'truncated_normal' is supported");
      read(v, "mean_kmh", c.sim.speed.mean_kmh, "sim.speed");
      read(v, "sd_kmh", c.sim.speed.sd_kmh, "sim.speed");
      read(v, "min_kmh", c.sim.speed.min_kmh, "sim.speed");
      read(v, "max_kmh", c.sim.speed.max_kmh, "sim.speed");
    }
  }

  if (j.contains("verify_window")) {
    if (j.at("verify_window").is_null())
      c.verify_window.reset();
    else
      c.verify_window = parse_window(j.at("verify_window"), c.clock, "verify_window");
  }

  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  const KernelParams& k = c.kernel;
  const DayClock& clk = c.clock;
  json kernel = {
      {"alpha", k.alpha},
      {"beta", k.beta},
      {"center_class_max_potential", k.center_class_max_potential},
      {"stay_clamp", {k.stay_min, k.stay_max}},
      {"class_weights",
       {{"backbone", k.class_weights.backbone},
        {"feeder", k.class_weights.feeder},
        {"metro", k.class_weights.metro},
        {"secondary_feeder_multiplier", k.class_weights.secondary_feeder_multiplier}}},
      {"stay", {{"center", schedule_json(k.stay.center, clk)}, {"periphery", schedule_json(k.stay.periphery, clk)}}},
      {"mass", {{"center", schedule_json(k.mass.center, clk)}, {"periphery", schedule_json(k.mass.periphery, clk)}}},
      {"hub_stay_factor", schedule_json(k.hub_stay_factor, clk)},
      {"hub_mass_factor", schedule_json(k.hub_mass_factor, clk)},
      {"metro", schedule_json(k.metro, clk)},
      {"bias",
       {{"inward", schedule_json(k.bias.inward, clk)},
        {"outward", schedule_json(k.bias.outward, clk)},
        {"neutral", schedule_json(k.bias.neutral, clk)}}},
      {"k", schedule_json(k.k, clk)},
  };
  if (!k.node_mass_scale.empty()) kernel["node_mass_scale"] = k.node_mass_scale;

  json overlay = {{"center_node", nullptr},
                  {"n_bands", c.overlay.n_bands},
                  {"hubs_per_band", c.overlay.hubs_per_band},
                  {"min_hub_separation_hops", c.overlay.min_hub_separation_hops},
                  {"feeder_mode", c.overlay.feeder_mode == FeederMode::single ? "single" : "multi"}};
  if (c.overlay.center_node) overlay["center_node"] = *c.overlay.center_node;

  json out = {
      {"name", c.name},
      {"start_date", c.start_date},
      {"clock", {{"steps_per_day", clk.steps_per_day}, {"step_minutes", clk.step_minutes}}},
      {"grid",
       {{"center_lat", c.grid.center_lat},
        {"center_lon", c.grid.center_lon},
        {"radius_km", c.grid.radius_km},
        {"resolution", c.grid.resolution},
        {"lattice_offset_km", {c.grid.lattice_offset_east_km, c.grid.lattice_offset_north_km}}}},
      {"overlay", overlay},
      {"kernel", kernel},
      {"sim",
       {{"pep_count", c.sim.pep_count},
        {"window", {c.sim.window.start, c.sim.window.end}},
        {"seed", c.sim.seed},
        {"attribute", c.sim.attribute},
        {"speed",
         {{"family", "truncated_normal"},
          {"mean_kmh", c.sim.speed.mean_kmh},
          {"sd_kmh", c.sim.speed.sd_kmh},
          {"min_kmh", c.sim.speed.min_kmh},
          {"max_kmh", c.sim.speed.max_kmh}}}}},
      {"verify_window", nullptr},
      {"output_dir", c.output_dir},
  };
  if (c.verify_window) out["verify_window"] = {c.verify_window->start, c.verify_window->end};
  return out;
}

std::string config_hash(const RunConfig& c) {
  json j = to_json(c);
  j.erase("output_dir");  // where artifacts land does not change their content
  return fnv1a_hex(j.dump());
}

}  // namespace mobgen
