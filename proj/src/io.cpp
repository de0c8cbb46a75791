#include "mobgen/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "mobgen/errors.hpp"

namespace mobgen {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

// Splits one CSV line into exactly `n` fields; no quoting is needed for our
// numeric and identifier columns.
std::vector<std::string_view> split(std::string_view line, std::size_t n, std::size_t lineno) {
  std::vector<std::string_view> out;
  out.reserve(n);
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    out.push_back(line.substr(pos, comma == std::string_view::npos ? comma : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (out.size() != n)
    throw DataError("line " + std::to_string(lineno) + ": expected " + std::to_string(n) +
                    " fields, got " + std::to_string(out.size()));
  return out;
}

template <typename T>
T parse_field(std::string_view s, std::size_t lineno) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw DataError("line " + std::to_string(lineno) + ": cannot parse '" + std::string(s) + "'");
  return v;
}

void expect_header(std::istream& in, const char* header) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file, expected header '" + std::string(header) + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw DataError("unexpected header '" + line + "', expected '" + header + "'");
}

template <typename Fn>
void for_each_row(std::istream& in, const char* header, std::size_t fields, Fn&& fn) {
  expect_header(in, header);
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fn(split(line, fields, lineno), lineno);
  }
}

json point(const GeoPoint& p) { return {{"type", "Point"}, {"coordinates", {p.lon, p.lat}}}; }

json ring(const std::vector<GeoPoint>& vertices) {
  json coords = json::array();
  for (const auto& v : vertices) coords.push_back({v.lon, v.lat});
  coords.push_back(coords.front());
  return {{"type", "Polygon"}, {"coordinates", {coords}}};
}

json line(const GeoPoint& a, const GeoPoint& b) {
  return {{"type", "LineString"}, {"coordinates", {{a.lon, a.lat}, {b.lon, b.lat}}}};
}

json feature(json geometry, json properties) {
  return {{"type", "Feature"}, {"geometry", std::move(geometry)}, {"properties", std::move(properties)}};
}

json collection(json features) {
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

}  // namespace

void write_hops(std::ostream& out, std::span<const HopRecord> hops) {
  std::string buf;
  buf.reserve(hops.size() * 48);
  for (const auto& h : hops) {
    buf += std::to_string(h.pep_id);
    buf += ',';
    buf += std::to_string(h.t);
    buf += ',';
    buf += std::to_string(h.origin);
    buf += ',';
    buf += std::to_string(h.dest);
    buf += ',';
    buf += format_double(h.distance_km);
    buf += ',';
    buf += format_double(h.travel_time_s);
    buf += '\n';
  }
  out << buf;
}

void read_hops(std::istream& in, const std::function<void(const HopRecord&)>& fn) {
  for_each_row(in, kHopsHeader, 6, [&](const auto& f, std::size_t n) {
    fn(HopRecord{parse_field<std::uint32_t>(f[0], n), parse_field<std::int32_t>(f[1], n),
                 parse_field<NodeIndex>(f[2], n), parse_field<NodeIndex>(f[3], n),
                 parse_field<double>(f[4], n), parse_field<double>(f[5], n)});
  });
}

std::vector<HopRecord> read_hops_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<HopRecord> out;
  read_hops(in, [&](const HopRecord& h) { out.push_back(h); });
  return out;
}

void write_od(std::ostream& out, std::span<const ODSummaryRow> rows) {
  for (const auto& r : rows) {
    out << r.origin << ',' << r.dest << ',' << r.t << ',' << r.trips << ',' << format_double(r.dist_mean)
        << ',' << format_double(r.dist_median) << ',' << format_double(r.dist_std) << ','
        << format_double(r.time_mean) << ',' << format_double(r.time_median) << ','
        << format_double(r.time_std) << '\n';
  }
}

std::vector<ODSummaryRow> read_od(std::istream& in) {
  std::vector<ODSummaryRow> rows;
  for_each_row(in, kOdHeader, 10, [&](const auto& f, std::size_t n) {
    rows.push_back({parse_field<NodeIndex>(f[0], n), parse_field<NodeIndex>(f[1], n),
                    parse_field<int>(f[2], n), parse_field<std::uint64_t>(f[3], n),
                    parse_field<double>(f[4], n), parse_field<double>(f[5], n),
                    parse_field<double>(f[6], n), parse_field<double>(f[7], n),
                    parse_field<double>(f[8], n), parse_field<double>(f[9], n)});
  });
  return rows;
}

void write_flows(std::ostream& out, std::span<const EdgeFlow> flows) {
  for (const auto& f : flows)
    out << f.src << ',' << f.dst << ',' << f.t << ',' << f.inward << ',' << f.outward << ',' << f.net
        << '\n';
}

std::vector<EdgeFlow> read_flows(std::istream& in) {
  std::vector<EdgeFlow> rows;
  for_each_row(in, kFlowsHeader, 6, [&](const auto& f, std::size_t n) {
    EdgeFlow e{parse_field<NodeIndex>(f[0], n), parse_field<NodeIndex>(f[1], n),
               parse_field<int>(f[2], n), parse_field<std::uint64_t>(f[3], n),
               parse_field<std::uint64_t>(f[4], n), parse_field<std::int64_t>(f[5], n)};
    if (e.net != static_cast<std::int64_t>(e.inward) - static_cast<std::int64_t>(e.outward))
      throw DataError("line " + std::to_string(n) + ": net != inward - outward");
    rows.push_back(e);
  });
  return rows;
}

void write_population(std::ostream& out, const BaseGraph& g, std::span<const double> p) {
  out << "node,id,lat,lon,p\n";
  for (NodeIndex i = 0; i < g.size(); ++i) {
    const Cell& c = g.cell(i);
    out << i << ',' << c.id << ',' << format_double(c.centroid.lat) << ','
        << format_double(c.centroid.lon) << ',' << format_double(p[i]) << '\n';
  }
}

void write_matrix(std::ostream& out, const DenseMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

json grid_geojson(const BaseGraph& g) {
  json features = json::array();
  for (NodeIndex i = 0; i < g.size(); ++i) {
    const Cell& c = g.cell(i);
    json props = {{"index", i}, {"id", c.id}, {"q", c.axial.q}, {"r", c.axial.r}};
    features.push_back(feature(ring(hexagon_vertices(g, i)), props));
    props["role"] = "centroid";
    features.push_back(feature(point(c.centroid), props));
  }
  json out = collection(features);
  out["properties"] = {{"node_count", g.size()},
                       {"resolution", g.config().resolution},
                       {"pitch_km", g.pitch_km()},
                       {"hex_diameter_km", g.hex_diameter_km()}};
  return out;
}

json overlay_geojson(const BaseGraph& g, const OverlayNetwork& overlay, const ClassWeights& weights) {
  json features = json::array();
  for (const auto& e : overlay.edges()) {
    json props = {{"src", e.src},
                  {"dst", e.dst},
                  {"class", std::string(to_string(e.cls))},
                  {"secondary", e.secondary},
                  {"sigma", e.sign},
                  {"omega", weights.weight(e)}};
    features.push_back(feature(line(g.cell(e.src).centroid, g.cell(e.dst).centroid), props));
  }
  for (NodeIndex i = 0; i < g.size(); ++i) {
    const bool center = i == overlay.center();
    if (!center && !overlay.is_hub(i)) continue;
    features.push_back(feature(point(g.cell(i).centroid),
                               {{"index", i},
                                {"id", g.cell(i).id},
                                {"role", center ? "center" : "hub"},
                                {"potential", overlay.potential(i)}}));
  }
  json out = collection(features);
  out["properties"] = {{"center", overlay.center()},
                       {"hubs", overlay.hubs()},
                       {"hub_shortfall", overlay.hub_shortfall()}};
  return out;
}

json population_geojson(const BaseGraph& g, std::span<const double> p) {
  json features = json::array();
  for (NodeIndex i = 0; i < g.size(); ++i)
    features.push_back(feature(ring(hexagon_vertices(g, i)),
                               {{"index", i}, {"id", g.cell(i).id}, {"population", p[i]}}));
  return collection(features);
}

json flows_geojson(const BaseGraph& g, std::span<const EdgeFlow> flows) {
  json features = json::array();
  for (const auto& f : flows)
    features.push_back(feature(line(g.cell(f.src).centroid, g.cell(f.dst).centroid),
                               {{"src", f.src},
                                {"dst", f.dst},
                                {"t", f.t},
                                {"inward", f.inward},
                                {"outward", f.outward},
                                {"net", f.net}}));
  return collection(features);
}

json report_to_json(const VerificationReport& r) {
  return {{"metrics",
           {{"l1_norm", r.l1_norm},
            {"rmse", r.rmse},
            {"mean_col_l1", r.mean_col_l1},
            {"mean_col_js", r.mean_col_js},
            {"weighted_l1", r.weighted_l1},
            {"weighted_rmse", r.weighted_rmse},
            {"weighted_js", r.weighted_js}}},
          {"js_log_base", "e"},
          {"K", r.pep_count},
          {"N", r.node_count},
          {"window", {r.window.start, r.window.end}}};
}

VerificationReport report_from_json(const json& j) {
  try {
    VerificationReport r;
    const json& m = j.at("metrics");
    r.l1_norm = m.at("l1_norm").get<double>();
    r.rmse = m.at("rmse").get<double>();
    r.mean_col_l1 = m.at("mean_col_l1").get<double>();
    r.mean_col_js = m.at("mean_col_js").get<double>();
    r.weighted_l1 = m.at("weighted_l1").get<double>();
    r.weighted_rmse = m.at("weighted_rmse").get<double>();
    r.weighted_js = m.at("weighted_js").get<double>();
    r.pep_count = j.at("K").get<std::uint64_t>();
    r.node_count = j.at("N").get<std::size_t>();
    r.window = {j.at("window").at(0).get<int>(), j.at("window").at(1).get<int>()};
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

std::string iso_bin_start(const std::string& start_date, const DayClock& clock, int t) {
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  if (std::sscanf(start_date.c_str(), "%d-%u-%u", &y, &m, &d) != 3)
    throw ConfigError("start_date '" + start_date + "' is not YYYY-MM-DD");
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) throw ConfigError("start_date '" + start_date + "' is not a valid date");

  using namespace std::chrono;
  const auto offset = seconds{static_cast<long long>(std::llround(t * clock.step_seconds()))};
  const sys_seconds when = sys_days{ymd} + offset;
  const auto day = floor<days>(when);
  const year_month_day out{day};
  const hh_mm_ss hms{when - day};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02lld", static_cast<int>(out.year()),
                static_cast<unsigned>(out.month()), static_cast<unsigned>(out.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long long>(hms.seconds().count()));
  return buf;
}

json bin_index(const std::string& start_date, const DayClock& clock, StepWindow window) {
  json bins = json::array();
  for (int t = window.start; t < window.end; ++t)
    bins.push_back({{"t", t}, {"start", iso_bin_start(start_date, clock, t)}});
  return bins;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

json read_json(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace mobgen
