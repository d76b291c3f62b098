#pragma once

#include "uavkit/attitude.hpp"

namespace uavkit {

// Local tangent plane anchored at a configurable origin. Survey areas are
// small, so a spherical Earth with fixed meters-per-degree at the origin
// latitude is sufficient.
struct LtpOrigin {
  double lat_deg = -6.9146;
  double lon_deg = 107.6098;
  double alt_m = 0.0;
};

inline constexpr double kEarthRadiusM = 6371000.0;

struct Geodetic {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_m = 0.0;
};

// Geodetic -> NED meters relative to the origin (down = origin_alt - alt).
Vec3 geodetic_to_ned(const Geodetic& g, const LtpOrigin& origin);

// NED meters relative to the origin -> geodetic.
Geodetic ned_to_geodetic(const Vec3& ned, const LtpOrigin& origin);

}  // namespace uavkit
