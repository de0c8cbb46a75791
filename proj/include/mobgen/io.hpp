#pragma once

// File formats shared by the CLI, the tests and downstream renderers.

#include <filesystem>
#include <fstream>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mobgen/aggregate.hpp"
#include "mobgen/dense_matrix.hpp"
#include "mobgen/evolution.hpp"
#include "mobgen/grid.hpp"
#include "mobgen/overlay.hpp"
#include "mobgen/realize.hpp"
#include "mobgen/schedule.hpp"
#include "mobgen/verify.hpp"

namespace mobgen {

inline constexpr const char* kHopsHeader = "pep_id,t,origin,dest,distance_km,travel_time_s";
inline constexpr const char* kOdHeader =
    "origin,dest,t,trips,dist_mean,dist_median,dist_std,time_mean,time_median,time_std";
inline constexpr const char* kFlowsHeader = "src,dst,t,inward,outward,net";

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// The write_* functions emit data rows only; callers write the matching
/// k*Header line once so that files can be streamed step by step.
void write_hops(std::ostream& out, std::span<const HopRecord> hops);
/// Streams records from a trajectory CSV (header required). Throws DataError
/// with the line number on a malformed row.
void read_hops(std::istream& in, const std::function<void(const HopRecord&)>& fn);
std::vector<HopRecord> read_hops_file(const std::filesystem::path& path);

void write_od(std::ostream& out, std::span<const ODSummaryRow> rows);
std::vector<ODSummaryRow> read_od(std::istream& in);

void write_flows(std::ostream& out, std::span<const EdgeFlow> flows);
std::vector<EdgeFlow> read_flows(std::istream& in);

/// node,id,lat,lon,p
void write_population(std::ostream& out, const BaseGraph& g, std::span<const double> p);

/// Row i holds entries (i, 0) .. (i, N-1).
void write_matrix(std::ostream& out, const DenseMatrix& m);

nlohmann::json grid_geojson(const BaseGraph& g);
nlohmann::json overlay_geojson(const BaseGraph& g, const OverlayNetwork& overlay,
                               const ClassWeights& weights);
nlohmann::json population_geojson(const BaseGraph& g, std::span<const double> p);
/// One LineString per flow row, drawn from the outer to the inner endpoint.
nlohmann::json flows_geojson(const BaseGraph& g, std::span<const EdgeFlow> flows);

nlohmann::json report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const nlohmann::json& j);

/// "YYYY-MM-DDTHH:MM:SS" for the start of step t counted from midnight of
/// `start_date` (YYYY-MM-DD). Steps past one day roll into later dates.
std::string iso_bin_start(const std::string& start_date, const DayClock& clock, int t);
/// [{"t": t, "start": iso}, ...] for every step of the window.
nlohmann::json bin_index(const std::string& start_date, const DayClock& clock, StepWindow window);

nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
/// Opens for writing, creating parent directories; throws IoError.
std::ofstream open_output(const std::filesystem::path& path);
std::ifstream open_input(const std::filesystem::path& path);

}  // namespace mobgen
