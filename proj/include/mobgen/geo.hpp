#pragma once

namespace mobgen {

inline constexpr double kEarthRadiusKm = 6371.0088;

struct GeoPoint {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees
};

/// Local tangent-plane coordinates in kilometers (x east, y north).
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Great-circle distance in kilometers.
double haversine_km(GeoPoint a, GeoPoint b);

/// Inverse azimuthal-equidistant projection around `origin`: distances and
/// bearings from the origin are preserved exactly.
GeoPoint unproject(GeoPoint origin, PlanarPoint p);

}  // namespace mobgen
