#include "uavkit/absolute.hpp"

#include <cmath>

#include "uavkit/errors.hpp"

namespace uavkit {

ReferencePair ReferencePair::with_field(double inclination_rad, double declination_rad) {
  ReferencePair ref;
  const double ci = std::cos(inclination_rad);
  ref.mag_ned = {ci * std::cos(declination_rad), ci * std::sin(declination_rad),
                 std::sin(inclination_rad)};
  return ref;
}

GravityVector extract_gravity(const Vec3& a_measured, const KinematicAiding& aid) {
  const Vec3 g = aid.accel_dynamic_mps2 + aid.omega.vec().cross(aid.velocity_mps) - a_measured;
  return {g.x(), g.y(), g.z()};
}

namespace {
// Clamp values that exceed the arcsine domain by at most tol; reject beyond.
double checked_asin_arg(double v, double tol, const char* what) {
  if (std::abs(v) > 1.0 + tol) throw InvalidMeasurement(what);
  return std::max(-1.0, std::min(1.0, v));
}
}  // namespace

RollPitch roll_pitch_from_gravity(const GravityVector& gv) {
  const double g = gv.g();
  if (g < 1e-9) throw InvalidMeasurement("roll_pitch_from_gravity: zero gravity vector");
  const double sx = checked_asin_arg(gv.gx / g, 1e-6, "roll_pitch_from_gravity: |gx| > g");
  const double pitch = -std::asin(sx);
  if (std::abs(pitch) >= deg2rad(89.0)) {
    throw SingularityError("roll_pitch_from_gravity: pitch within 1 deg of +/-90");
  }
  const double sy = checked_asin_arg(gv.gy / (g * std::cos(pitch)), 1e-6,
                                     "roll_pitch_from_gravity: |gy| > g cos(pitch)");
  return {std::asin(sy), pitch};
}

double yaw_from_mag(const MagVector& m, double roll_rad, double pitch_rad,
                    double declination_rad) {
  const double cphi = std::cos(roll_rad), sphi = std::sin(roll_rad);
  const double cth = std::cos(pitch_rad), sth = std::sin(pitch_rad);
  // level = Ry(pitch) * Rx(roll) * m
  const double my_l = m.my * cphi - m.mz * sphi;
  const double mz_l = m.my * sphi + m.mz * cphi;
  const double xh = m.mx * cth + mz_l * sth;
  const double yh = my_l;
  if (std::hypot(xh, yh) < 1e-9) {
    throw IndeterminateHeading("yaw_from_mag: leveled field has no horizontal component");
  }
  return wrap_pi(std::atan2(-yh, xh) + declination_rad);
}

Mat3 triad(const Vec3& a_body, const Vec3& m_body, const ReferencePair& ref) {
  const auto make_triad = [](const Vec3& a, const Vec3& m, const char* side) {
    const double an = a.norm(), mn = m.norm();
    if (an < 1e-12 || mn < 1e-12) {
      throw DegenerateGeometry(std::string("triad: zero-length vector in ") + side + " pair");
    }
    const Vec3 i = a / an;
    const Vec3 cross = i.cross(m / mn);
    const double cn = cross.norm();
    if (cn < 1e-9) {
      throw DegenerateGeometry(std::string("triad: collinear vectors in ") + side + " pair");
    }
    const Vec3 j = cross / cn;
    const Vec3 k = i.cross(j);
    Mat3 t;
    t.col(0) = i;
    t.col(1) = j;
    t.col(2) = k;
    return t;
  };
  const Mat3 tb = make_triad(a_body, m_body, "body");
  const Mat3 tr = make_triad(ref.gravity_ned, ref.mag_ned, "reference");
  // Each triad axis satisfies t_body = C_nb * t_ref, so summing the outer
  // products ref*body' yields the body-to-navigation matrix.
  return tr * tb.transpose();
}

}  // namespace uavkit
