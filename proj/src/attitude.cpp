#include "uavkit/attitude.hpp"

#include <cmath>
#include <cstdio>

#include "uavkit/errors.hpp"

namespace uavkit {

double wrap_pi(double angle_rad) {
  double a = std::fmod(angle_rad + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

Quaternion::Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {
  if (w < 0.0) {
    w = -w;
    x = -x;
    y = -y;
    z = -z;
  }
}

double Quaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion Quaternion::normalized() const {
  const double n = norm();
  if (n < 1e-12) throw NumericalError("cannot normalize near-zero quaternion");
  return {w / n, x / n, y / n, z / n};
}

Quaternion Quaternion::operator*(const Quaternion& r) const {
  return {w * r.w - x * r.x - y * r.y - z * r.z,
          w * r.x + x * r.w + y * r.z - z * r.y,
          w * r.y - x * r.z + y * r.w + z * r.x,
          w * r.z + x * r.y - y * r.x + z * r.w};
}

double attitude_angle_between(const Quaternion& a, const Quaternion& b) {
  const double dot = a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
  const double c = std::min(1.0, std::abs(dot));
  return 2.0 * std::acos(c);
}

double attitude_angle_between(const Mat3& a, const Mat3& b) {
  // angle of the relative rotation a^T * b
  const double tr = (a.transpose() * b).trace();
  const double c = std::max(-1.0, std::min(1.0, (tr - 1.0) / 2.0));
  return std::acos(c);
}

Quaternion axis_angle_to_quat(const AxisAngle& aa) {
  if (std::abs(aa.axis.norm() - 1.0) > 1e-6) {
    throw InvalidInput("axis_angle_to_quat: axis must be a unit vector");
  }
  const double half = 0.5 * aa.angle_rad;
  const double s = std::sin(half);
  return {std::cos(half), aa.axis.x() * s, aa.axis.y() * s, aa.axis.z() * s};
}

Mat3 euler_to_dcm(const EulerAngles& e) {
  const double cphi = std::cos(e.roll_rad), sphi = std::sin(e.roll_rad);
  const double cth = std::cos(e.pitch_rad), sth = std::sin(e.pitch_rad);
  const double cpsi = std::cos(e.yaw_rad), spsi = std::sin(e.yaw_rad);
  Mat3 c;
  c << cth * cpsi, sphi * sth * cpsi - cphi * spsi, cphi * sth * cpsi + sphi * spsi,
       cth * spsi, sphi * sth * spsi + cphi * cpsi, cphi * sth * spsi - sphi * cpsi,
       -sth,       sphi * cth,                      cphi * cth;
  return c;
}

EulerAngles dcm_to_euler(const Mat3& c, bool* near_singular) {
  EulerAngles e;
  const double c31 = std::max(-1.0, std::min(1.0, c(2, 0)));
  const bool gimbal = std::abs(c31) >= 1.0 - 1e-9;
  if (near_singular) *near_singular = gimbal;
  if (gimbal) {
    // Pitch clamped to +/-90 deg; only yaw-roll sum/difference is observable,
    // reported entirely as yaw.
    e.pitch_rad = (c31 < 0.0) ? kPi / 2.0 : -kPi / 2.0;
    e.roll_rad = 0.0;
    e.yaw_rad = wrap_pi(std::atan2(-c(0, 1), c(1, 1)));
    return e;
  }
  e.pitch_rad = -std::asin(c31);
  e.roll_rad = std::atan2(c(2, 1), c(2, 2));
  e.yaw_rad = wrap_pi(std::atan2(c(1, 0), c(0, 0)));
  return e;
}

Quaternion dcm_to_quat(const Mat3& c) {
  const double tr = c.trace();
  double w, x, y, z;
  if (tr > -0.75) {
    // trace formula; well conditioned because e0 = sqrt(1+tr)/2 > 0.25 here
    w = 0.5 * std::sqrt(1.0 + tr);
    const double k = 1.0 / (4.0 * w);
    x = k * (c(2, 1) - c(1, 2));
    y = k * (c(0, 2) - c(2, 0));
    z = k * (c(1, 0) - c(0, 1));
  } else if (c(0, 0) >= c(1, 1) && c(0, 0) >= c(2, 2)) {
    x = 0.5 * std::sqrt(1.0 + c(0, 0) - c(1, 1) - c(2, 2));
    const double k = 1.0 / (4.0 * x);
    w = k * (c(2, 1) - c(1, 2));
    y = k * (c(0, 1) + c(1, 0));
    z = k * (c(0, 2) + c(2, 0));
  } else if (c(1, 1) >= c(2, 2)) {
    y = 0.5 * std::sqrt(1.0 - c(0, 0) + c(1, 1) - c(2, 2));
    const double k = 1.0 / (4.0 * y);
    w = k * (c(0, 2) - c(2, 0));
    x = k * (c(0, 1) + c(1, 0));
    z = k * (c(1, 2) + c(2, 1));
  } else {
    z = 0.5 * std::sqrt(1.0 - c(0, 0) - c(1, 1) + c(2, 2));
    const double k = 1.0 / (4.0 * z);
    w = k * (c(1, 0) - c(0, 1));
    x = k * (c(0, 2) + c(2, 0));
    y = k * (c(1, 2) + c(2, 1));
  }
  return Quaternion(w, x, y, z).normalized();
}

Mat3 quat_to_dcm(const Quaternion& q_in) {
  Quaternion q = q_in;
  const double dev = std::abs(q.norm() - 1.0);
  if (dev > 1e-12) {
    if (dev > 1e-6) {
      std::fprintf(stderr, "uavkit: quat_to_dcm normalizing input off unit norm by %.3e\n", dev);
    }
    q = q.normalized();
  }
  const double ww = q.w * q.w, xx = q.x * q.x, yy = q.y * q.y, zz = q.z * q.z;
  const double wx = q.w * q.x, wy = q.w * q.y, wz = q.w * q.z;
  const double xy = q.x * q.y, xz = q.x * q.z, yz = q.y * q.z;
  Mat3 c;
  c << ww + xx - yy - zz, 2.0 * (xy - wz),   2.0 * (xz + wy),
       2.0 * (xy + wz),   ww - xx + yy - zz, 2.0 * (yz - wx),
       2.0 * (xz - wy),   2.0 * (yz + wx),   ww - xx - yy + zz;
  return c;
}

Quaternion euler_to_quat(const EulerAngles& e) { return dcm_to_quat(euler_to_dcm(e)); }

EulerAngles quat_to_euler(const Quaternion& q) { return dcm_to_euler(quat_to_dcm(q)); }

Vec3 euler_rates(const EulerAngles& e, const BodyRates& w) {
  if (std::abs(e.pitch_rad) >= deg2rad(89.0)) {
    throw SingularityError("euler_rates: pitch within 1 deg of +/-90");
  }
  const double cphi = std::cos(e.roll_rad), sphi = std::sin(e.roll_rad);
  const double tth = std::tan(e.pitch_rad), sec = 1.0 / std::cos(e.pitch_rad);
  return {w.p_rps + sphi * tth * w.q_rps + cphi * tth * w.r_rps,
          cphi * w.q_rps - sphi * w.r_rps,
          sphi * sec * w.q_rps + cphi * sec * w.r_rps};
}

Mat3 dcm_rate(const Mat3& c, const BodyRates& w) {
  Mat3 omega;
  omega << 0.0,      -w.r_rps,  w.q_rps,
           w.r_rps,   0.0,     -w.p_rps,
          -w.q_rps,   w.p_rps,  0.0;
  return c * omega;
}

Vec4 quat_rate_raw(const Vec4& q, const Vec3& w) {
  const double e0 = q[0], e1 = q[1], e2 = q[2], e3 = q[3];
  const double p = w.x(), qq = w.y(), r = w.z();
  return {0.5 * (-e1 * p - e2 * qq - e3 * r),
          0.5 * (e0 * p - e3 * qq + e2 * r),
          0.5 * (e3 * p + e0 * qq - e1 * r),
          0.5 * (-e2 * p + e1 * qq + e0 * r)};
}

Vec4 quat_rate(const Quaternion& q, const BodyRates& w) {
  return quat_rate_raw(q.vec(), w.vec());
}

Vec4 integrate_attitude_raw(const Vec4& q, const Vec3& w, double dt_s) {
  if (!(dt_s > 0.0)) throw InvalidInput("integrate_attitude: dt must be positive");
  const Vec4 qn = q + dt_s * quat_rate_raw(q, w);
  const double n = qn.norm();
  if (n < 1e-12) throw NumericalError("integrate_attitude: degenerate step");
  return qn / n;
}

Quaternion integrate_attitude(const Quaternion& q, const BodyRates& w, double dt_s) {
  return Quaternion::from_vec(integrate_attitude_raw(q.vec(), w.vec(), dt_s));
}

}  // namespace uavkit
