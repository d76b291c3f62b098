#pragma once

#include <Eigen/Dense>

namespace uavkit {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kGravityMps2 = 9.80665;
inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

// Wraps an angle into [-pi, pi).
double wrap_pi(double angle_rad);

// Aerospace Euler angles for the Z-Y-X (yaw-pitch-roll) rotation order.
// Roll about body x, pitch about body y, yaw about body z. Conversions keep
// pitch inside (-pi/2, pi/2) and wrap yaw into [-pi, pi).
struct EulerAngles {
  double roll_rad = 0.0;
  double pitch_rad = 0.0;
  double yaw_rad = 0.0;
};

// Body-frame angular rates [p q r] in rad/s (x forward, y right, z down).
struct BodyRates {
  double p_rps = 0.0;
  double q_rps = 0.0;
  double r_rps = 0.0;

  Vec3 vec() const { return {p_rps, q_rps, r_rps}; }
  static BodyRates from_vec(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
};

// Unit rotation axis plus total rotation angle.
struct AxisAngle {
  Vec3 axis{0.0, 0.0, 1.0};
  double angle_rad = 0.0;
};

// Scalar-first unit quaternion in the body-to-navigation sense.
//
// The constructor canonicalizes the sign so the scalar part is non-negative;
// q and -q denote the same attitude, so comparisons should be attitude-level
// (see attitude_angle_between). Construction does not normalize.
struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Quaternion() = default;
  Quaternion(double w_, double x_, double y_, double z_);

  double norm() const;
  Quaternion normalized() const;
  Quaternion conjugate() const { return {w, -x, -y, -z}; }
  Quaternion operator*(const Quaternion& rhs) const;  // Hamilton product

  Vec4 vec() const { return {w, x, y, z}; }
  static Quaternion from_vec(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
};

// Geodesic rotation angle between two attitudes, insensitive to quaternion sign.
double attitude_angle_between(const Quaternion& a, const Quaternion& b);
double attitude_angle_between(const Mat3& a, const Mat3& b);

// e0 = cos(f/2), (e1,e2,e3) = axis * sin(f/2). Throws InvalidInput unless the
// axis is unit to 1e-6.
Quaternion axis_angle_to_quat(const AxisAngle& aa);

// Direction cosine matrix C_bn (body -> navigation), the Rz(yaw)*Ry(pitch)*Rx(roll)
// composition. Always orthonormal with determinant +1.
Mat3 euler_to_dcm(const EulerAngles& e);

// Inverse of euler_to_dcm. Near gimbal lock (|c31| >= 1 - 1e-9) the pitch is
// clamped to +/-90 deg, roll is reported as zero and *near_singular (when
// given) is set.
EulerAngles dcm_to_euler(const Mat3& c_bn, bool* near_singular = nullptr);

// Orthonormal matrix -> unit quaternion with e0 >= 0. Uses the trace formula
// where it is well conditioned (e0 > 0.25) and otherwise the largest-diagonal
// branch, so 180-degree rotations are handled.
Quaternion dcm_to_quat(const Mat3& c_bn);

// Unit quaternion -> C_bn. A non-unit input is normalized first; deviations
// above 1e-6 emit a one-line stderr warning.
Mat3 quat_to_dcm(const Quaternion& q);

// Convenience composites.
Quaternion euler_to_quat(const EulerAngles& e);
EulerAngles quat_to_euler(const Quaternion& q);

// Euler angle rates [roll_dot pitch_dot yaw_dot] for body rates w.
// Throws SingularityError when |pitch| >= 89 deg.
Vec3 euler_rates(const EulerAngles& e, const BodyRates& w);

// Cdot = C * Omega(w), with Omega the skew matrix of [p q r].
Mat3 dcm_rate(const Mat3& c_bn, const BodyRates& w);

// qdot = 1/2 * q (x) (0, w), returned as a scalar-first 4-vector. Consistent
// with dcm_rate: propagating either representation yields the same attitude.
Vec4 quat_rate(const Quaternion& q, const BodyRates& w);

// Same kinematics on a raw 4-vector without sign canonicalization. The fusion
// filter iterates on raw state vectors and must not flip hemispheres.
Vec4 quat_rate_raw(const Vec4& q, const Vec3& w_rps);

// One first-order step q + qdot*dt followed by renormalization.
Quaternion integrate_attitude(const Quaternion& q, const BodyRates& w, double dt_s);
Vec4 integrate_attitude_raw(const Vec4& q, const Vec3& w_rps, double dt_s);

}  // namespace uavkit
