#include "mobgen/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mobgen {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

}  // namespace

double haversine_km(GeoPoint a, GeoPoint b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = phi2 - phi1;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

GeoPoint unproject(GeoPoint origin, PlanarPoint p) {
  const double rho = std::hypot(p.x, p.y);
  if (rho == 0.0) return origin;
  const double c = rho / kEarthRadiusKm;
  const double bearing = std::atan2(p.x, p.y);
  const double phi0 = origin.lat * kDegToRad;
  const double lambda0 = origin.lon * kDegToRad;
  const double phi = std::asin(std::sin(phi0) * std::cos(c) +
                               std::cos(phi0) * std::sin(c) * std::cos(bearing));
  const double lambda =
      lambda0 + std::atan2(std::sin(bearing) * std::sin(c) * std::cos(phi0),
                           std::cos(c) - std::sin(phi0) * std::sin(phi));
  return {phi * kRadToDeg, lambda * kRadToDeg};
}

}  // namespace mobgen
