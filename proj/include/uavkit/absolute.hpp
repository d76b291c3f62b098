#pragma once

#include "uavkit/attitude.hpp"

namespace uavkit {

// Body-frame gravity components recovered from the accelerometer after
// removing dynamic and centrifugal acceleration. The magnitude deviation from
// standard gravity serves as a quality metric for validity gating.
struct GravityVector {
  double gx = 0.0;
  double gy = 0.0;
  double gz = 0.0;

  Vec3 vec() const { return {gx, gy, gz}; }
  double g() const { return vec().norm(); }
  double quality_error() const { return std::abs(g() - kGravityMps2); }
};

// Body-frame magnetic field, any consistent units.
struct MagVector {
  double mx = 0.0;
  double my = 0.0;
  double mz = 0.0;

  Vec3 vec() const { return {mx, my, mz}; }
};

// Navigation-frame reference directions for gravity and the local magnetic
// field. The pair must not be collinear or the triad construction degenerates.
struct ReferencePair {
  Vec3 gravity_ned{0.0, 0.0, kGravityMps2};
  Vec3 mag_ned{0.8660254037844387, 0.0, 0.5};  // unit field, 30 deg inclination

  // Unit-magnitude field with the given inclination (down positive) and
  // declination (east of true north positive).
  static ReferencePair with_field(double inclination_rad, double declination_rad);
};

// Rotation rate, velocity and dynamic acceleration used to strip maneuver
// effects from the accelerometer. All vectors are body-frame.
struct KinematicAiding {
  BodyRates omega;
  Vec3 velocity_mps{0.0, 0.0, 0.0};
  Vec3 accel_dynamic_mps2{0.0, 0.0, 0.0};
};

// g_body = a_dynamic + omega x v - a_measured.
GravityVector extract_gravity(const Vec3& a_measured, const KinematicAiding& aid);

// pitch = -asin(gx/g), roll = asin(gy / (g cos(pitch))). Components outside
// the physical range (after a 1e-6 clamp) throw InvalidMeasurement; pitch
// within 1 deg of +/-90 throws SingularityError.
struct RollPitch {
  double roll_rad = 0.0;
  double pitch_rad = 0.0;
};
RollPitch roll_pitch_from_gravity(const GravityVector& gv);

// Tilt-compensated heading: de-rotate the magnetic vector by roll then pitch
// into the level frame and take the full-quadrant heading of the horizontal
// component. declination_rad is added to the magnetic heading. Throws
// IndeterminateHeading when the leveled horizontal magnitude is below 1e-9.
double yaw_from_mag(const MagVector& m, double roll_rad, double pitch_rad,
                    double declination_rad = 0.0);

// Two-vector triad attitude solution. Builds orthonormal triads from the
// body pair (a_b, m_b) and the reference pair and composes them into the
// body-to-navigation rotation. Gravity is the exactly-matched direction,
// the magnetic vector only fixes the rotation about it. Throws
// DegenerateGeometry for zero or collinear pairs.
Mat3 triad(const Vec3& a_body, const Vec3& m_body, const ReferencePair& ref);

}  // namespace uavkit
