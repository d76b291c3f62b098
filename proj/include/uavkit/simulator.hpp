#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "uavkit/absolute.hpp"
#include "uavkit/attitude.hpp"
#include "uavkit/geodesy.hpp"

namespace uavkit {

// Ground-truth vehicle state at one sample instant. Position integrates
// velocity and attitude integrates the body rates step to step; the dynamic
// acceleration is the body-frame rate of change of body-referenced velocity,
// so accel = a_dyn + omega x v_body - g_body reconstructs the accelerometer.
struct TruthState {
  double t_s = 0.0;
  Vec3 pos_ned{0.0, 0.0, 0.0};
  Vec3 vel_ned{0.0, 0.0, 0.0};
  Quaternion attitude;
  BodyRates rates;
  Vec3 accel_dyn_body{0.0, 0.0, 0.0};
};

// Piecewise maneuver description. Turns are coordinated: the bank angle
// follows atan(rate * speed / g) and the yaw rate tracks the achieved bank,
// so the centripetal acceleration matches omega x v throughout.
struct ManeuverSegment {
  enum class Kind { kStraightLevel, kCoordinatedTurn, kClimb, kHold };

  Kind kind = Kind::kStraightLevel;
  double duration_s = 0.0;
  double turn_rate_rps = 0.0;   // kCoordinatedTurn
  double climb_rate_mps = 0.0;  // kClimb

  static ManeuverSegment straight(double duration_s);
  static ManeuverSegment turn(double duration_s, double rate_rps);
  static ManeuverSegment climb(double duration_s, double rate_mps);
  static ManeuverSegment hold(double duration_s);
};

struct TrajectoryConfig {
  double groundspeed_mps = 20.0;
  double yaw0_rad = 0.0;
  Vec3 start_ned{0.0, 0.0, 0.0};
  double sample_rate_hz = 250.0;
  double attitude_slew_rps = deg2rad(45.0);  // bank/pitch ramp between segments
};

// 250 Hz kinematically consistent truth stream for the given segments.
// Throws InvalidInput for an empty segment list.
std::vector<TruthState> generate_trajectory(const std::vector<ManeuverSegment>& segments,
                                            const TrajectoryConfig& cfg = {});

// Sensor imperfections. A fixed seed reproduces the stream byte for byte.
struct SensorErrorModel {
  Vec3 gyro_bias_rps{0.0, 0.0, 0.0};
  double gyro_noise_rps = 0.0;
  double accel_noise_mps2 = 0.0;
  double mag_noise = 0.0;
  double vibration_amp_mps2 = 0.0;
  double vibration_freq_hz = 50.0;
  double gps_vel_noise_mps = 0.0;
  std::uint64_t seed = 0;
};

struct SensorRates {
  double imu_hz = 250.0;
  double mag_hz = 50.0;
  double gps_hz = 4.0;
};

// One timestamped sensor sample. Only the fields of the given kind are
// meaningful.
struct SensorRecord {
  enum class Kind { kImu, kMag, kGps };

  double t_s = 0.0;
  Kind kind = Kind::kImu;
  Vec3 accel_mps2{0.0, 0.0, 0.0};
  Vec3 gyro_rps{0.0, 0.0, 0.0};
  Vec3 mag{0.0, 0.0, 0.0};
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_m = 0.0;
  Vec3 vel_ned_mps{0.0, 0.0, 0.0};
};

// Synthesizes the multirate sensor stream from a truth trajectory:
// accelerometer from the inverted gravity-extraction model plus vibration and
// noise, gyro with constant bias and noise, magnetometer as the body-frame
// reference field, GPS as interpolated position/velocity. Truth must be
// sampled at rates.imu_hz; mag and gps epochs are derived from it.
std::vector<SensorRecord> simulate_sensors(const std::vector<TruthState>& truth,
                                           const SensorErrorModel& err,
                                           const ReferencePair& ref = {},
                                           const LtpOrigin& origin = {},
                                           const SensorRates& rates = {});

// JSON Lines serialization, one record per line.
std::string sensor_record_to_json(const SensorRecord& rec);
void write_sensor_log(const std::string& path, const std::vector<SensorRecord>& records);
std::vector<SensorRecord> read_sensor_log(const std::string& path);

// Deterministic normal deviates (64-bit Mersenne Twister + Box-Muller),
// independent of the standard library's unspecified distribution internals.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : gen_(seed) {}

  double next(double sigma);

 private:
  double uniform01();

  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace uavkit
