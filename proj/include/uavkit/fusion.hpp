#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uavkit/absolute.hpp"
#include "uavkit/attitude.hpp"
#include "uavkit/iir.hpp"
#include "uavkit/simulator.hpp"

namespace uavkit {

using Vec7 = Eigen::Matrix<double, 7, 1>;
using Mat7 = Eigen::Matrix<double, 7, 7>;
using Mat7x3 = Eigen::Matrix<double, 7, 3>;
using Mat4x7 = Eigen::Matrix<double, 4, 7>;

// Filter state x = [e0 e1 e2 e3 bp bq br]: attitude quaternion plus gyro
// bias, with full 7x7 covariance. The quaternion block is renormalized after
// every update; its sign is left alone so the covariance cross terms stay
// consistent.
struct FusionState {
  Vec7 x = (Vec7() << 1, 0, 0, 0, 0, 0, 0).finished();
  Mat7 p = Mat7::Zero();

  Vec4 quat_raw() const { return x.head<4>(); }
  Quaternion quat() const { return Quaternion::from_vec(x.head<4>()); }
  Vec3 bias_rps() const { return x.tail<3>(); }

  void renormalize_quat();
};

// Process/measurement noise and the initial covariance. The stock diagonals
// are tuned against the simulator scenarios; override via json file for
// experiments: {"q_quat":..,"q_bias":..,"r_quat":..,"p0_quat":..,"p0_bias":..}.
struct NoiseConfig {
  Mat7 q = Mat7::Zero();
  Eigen::Matrix4d r = Eigen::Matrix4d::Zero();
  Mat7 p0 = Mat7::Zero();

  static NoiseConfig defaults();
  static NoiseConfig from_diagonals(double q_quat, double q_bias, double r_quat,
                                    double p0_quat, double p0_bias);
  static NoiseConfig from_file(const std::string& path);
};

// Absolute attitude observation from the triad solution.
struct AttitudeMeasurement {
  Vec4 z{1.0, 0.0, 0.0, 0.0};
  double t_s = 0.0;
};

// State transition for one dt step: A couples the gyro bias into the
// quaternion through the (negated) quaternion rate matrix, B maps the rate
// input the same way, and the bias block is identity (constant-bias model).
// A*x + B*u - x equals dt * quat_rate(q, u - b) in the quaternion components.
void build_transition(const Vec4& q, double dt_s, Mat7& a, Mat7x3& b);

// H = [I4 | 0]: the measurement observes the quaternion components directly.
Mat4x7 measurement_matrix();

// x <- A x + B u, P <- A P A' + Q, quaternion renormalized.
FusionState time_update(const FusionState& s, const BodyRates& u, const NoiseConfig& cfg,
                        double dt_s);

// Kalman gain K = P H'(H P H' + R)^-1, state and covariance update, with the
// measurement sign-aligned to the prediction first. P is re-symmetrized.
// Throws NumericalError when the innovation covariance is singular.
FusionState measurement_update(const FusionState& s, const AttitudeMeasurement& z,
                               const NoiseConfig& cfg);

// One output row per filter step.
struct AhrsLogRecord {
  double t_s = 0.0;
  Vec4 quat{1.0, 0.0, 0.0, 0.0};
  EulerAngles euler;
  Vec3 bias_rps{0.0, 0.0, 0.0};
  bool is_measurement = false;
};

struct AhrsRates {
  double imu_hz = 250.0;
  double update_hz = 50.0;  // time updates
  double meas_hz = 4.0;     // absolute attitude updates (gps records)
};

struct AhrsConfig {
  AhrsRates rates;
  FilterSpec filter;
  ReferencePair reference;
  double mag_declination_rad = 0.0;
  bool measurement_updates = true;
  // numerical-health instrumentation (covariance symmetry/eigenvalues per update)
  bool collect_health = false;
};

struct AhrsHealth {
  double max_asymmetry = 0.0;       // max ||P - P'|| over every update
  double min_eigenvalue = 0.0;      // most negative covariance eigenvalue seen
  double max_diag_increase = 0.0;   // worst posterior-minus-prior diagonal at updates
  bool any = false;
};

struct AhrsResult {
  std::vector<AhrsLogRecord> log;
  std::size_t imu_samples = 0;
  std::size_t time_updates = 0;
  std::size_t measurement_updates = 0;
  std::size_t rejected_measurements = 0;
  AhrsHealth health;
};

// Multirate pipeline: 250 Hz samples pass through per-channel butterworth
// conditioning; every update period the latest filtered gyro drives a time
// update; every gps record the gravity vector is extracted with gps aiding,
// fused with the latest magnetometer sample into a triad measurement, and a
// measurement update runs. The first valid triad solution seeds the attitude.
// Degenerate triad geometry skips that measurement and counts it as rejected.
// Records must be time sorted or InvalidInput is thrown.
AhrsResult run_ahrs(const std::vector<SensorRecord>& records, const NoiseConfig& noise,
                    const AhrsConfig& cfg = {});

// Pure rate integration of the same conditioned gyro stream (no bias removal,
// no measurements) for dead-reckoning comparisons. q0 seeds the attitude.
std::vector<AhrsLogRecord> run_dead_reckoning(const std::vector<SensorRecord>& records,
                                              const Quaternion& q0, const AhrsConfig& cfg = {});

// attitude.csv with header
// t_s,e0,e1,e2,e3,roll_deg,pitch_deg,yaw_deg,bp_rps,bq_rps,br_rps,kind
void write_attitude_log(const std::string& path, const std::vector<AhrsLogRecord>& log);
std::vector<AhrsLogRecord> read_attitude_log(const std::string& path);

}  // namespace uavkit
