#include "uavkit/geodesy.hpp"

#include <cmath>

namespace uavkit {

namespace {
double meters_per_deg_lat() { return kEarthRadiusM * kPi / 180.0; }
double meters_per_deg_lon(double lat0_deg) {
  return kEarthRadiusM * std::cos(deg2rad(lat0_deg)) * kPi / 180.0;
}
}  // namespace

Vec3 geodetic_to_ned(const Geodetic& g, const LtpOrigin& origin) {
  const double north = (g.lat_deg - origin.lat_deg) * meters_per_deg_lat();
  const double east = (g.lon_deg - origin.lon_deg) * meters_per_deg_lon(origin.lat_deg);
  const double down = origin.alt_m - g.alt_m;
  return {north, east, down};
}

Geodetic ned_to_geodetic(const Vec3& ned, const LtpOrigin& origin) {
  Geodetic g;
  g.lat_deg = origin.lat_deg + ned.x() / meters_per_deg_lat();
  g.lon_deg = origin.lon_deg + ned.y() / meters_per_deg_lon(origin.lat_deg);
  g.alt_m = origin.alt_m - ned.z();
  return g;
}

}  // namespace uavkit
