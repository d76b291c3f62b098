#include "uavkit/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "uavkit/errors.hpp"
#include "uavkit/logio.hpp"

#include "json.hpp"

namespace uavkit {

ManeuverSegment ManeuverSegment::straight(double duration_s) {
  return {Kind::kStraightLevel, duration_s, 0.0, 0.0};
}
ManeuverSegment ManeuverSegment::turn(double duration_s, double rate_rps) {
  return {Kind::kCoordinatedTurn, duration_s, rate_rps, 0.0};
}
ManeuverSegment ManeuverSegment::climb(double duration_s, double rate_mps) {
  return {Kind::kClimb, duration_s, 0.0, rate_mps};
}
ManeuverSegment ManeuverSegment::hold(double duration_s) {
  return {Kind::kHold, duration_s, 0.0, 0.0};
}

namespace {

// Body rates from Euler angle rates (inverse of the rate matrix).
BodyRates body_rates_from_euler_rates(double roll, double pitch, double roll_dot,
                                      double pitch_dot, double yaw_dot) {
  const double cphi = std::cos(roll), sphi = std::sin(roll);
  const double cth = std::cos(pitch), sth = std::sin(pitch);
  return {roll_dot - yaw_dot * sth,
          pitch_dot * cphi + yaw_dot * cth * sphi,
          -pitch_dot * sphi + yaw_dot * cth * cphi};
}

double slew_toward(double current, double target, double max_step) {
  const double d = target - current;
  return current + std::max(-max_step, std::min(max_step, d));
}

}  // namespace

std::vector<TruthState> generate_trajectory(const std::vector<ManeuverSegment>& segments,
                                            const TrajectoryConfig& cfg) {
  if (segments.empty()) throw InvalidInput("generate_trajectory: empty segment list");
  if (!(cfg.sample_rate_hz > 0.0)) throw InvalidInput("generate_trajectory: bad sample rate");

  const double dt = 1.0 / cfg.sample_rate_hz;
  const double v = cfg.groundspeed_mps;
  const bool moving = v >= 0.5;

  Vec3 pos = cfg.start_ned;
  double roll = 0.0, pitch = 0.0, yaw = cfg.yaw0_rad;
  double roll_target = 0.0, pitch_target = 0.0, direct_yaw_rate = 0.0;

  std::vector<TruthState> out;
  std::size_t total_steps = 0;
  for (const auto& seg : segments) total_steps += static_cast<std::size_t>(std::llround(seg.duration_s * cfg.sample_rate_hz));
  out.reserve(total_steps + 1);

  std::size_t step_index = 0;
  auto emit = [&](double roll_dot, double pitch_dot, double yaw_dot) {
    TruthState s;
    s.t_s = static_cast<double>(step_index) * dt;
    s.pos_ned = pos;
    const double cth = std::cos(pitch), sth = std::sin(pitch);
    s.vel_ned = {v * cth * std::cos(yaw), v * cth * std::sin(yaw), -v * sth};
    s.attitude = euler_to_quat({roll, pitch, yaw});
    s.rates = body_rates_from_euler_rates(roll, pitch, roll_dot, pitch_dot, yaw_dot);
    out.push_back(s);
  };

  for (const auto& seg : segments) {
    switch (seg.kind) {
      case ManeuverSegment::Kind::kStraightLevel:
        roll_target = 0.0;
        pitch_target = 0.0;
        direct_yaw_rate = 0.0;
        break;
      case ManeuverSegment::Kind::kCoordinatedTurn:
        if (moving) {
          roll_target = std::atan(seg.turn_rate_rps * v / kGravityMps2);
          direct_yaw_rate = 0.0;
        } else {
          // pivot in place: no bank, commanded yaw rate directly
          roll_target = 0.0;
          direct_yaw_rate = seg.turn_rate_rps;
        }
        pitch_target = 0.0;
        break;
      case ManeuverSegment::Kind::kClimb:
        roll_target = 0.0;
        pitch_target = moving ? std::asin(std::max(-0.5, std::min(0.5, seg.climb_rate_mps / v)))
                              : 0.0;
        direct_yaw_rate = 0.0;
        break;
      case ManeuverSegment::Kind::kHold:
        // keep the previous targets
        break;
    }

    const auto steps = static_cast<std::size_t>(std::llround(seg.duration_s * cfg.sample_rate_hz));
    for (std::size_t i = 0; i < steps; ++i) {
      const double max_step = cfg.attitude_slew_rps * dt;
      const double roll_next = slew_toward(roll, roll_target, max_step);
      const double pitch_next = slew_toward(pitch, pitch_target, max_step);
      const double roll_dot = (roll_next - roll) / dt;
      const double pitch_dot = (pitch_next - pitch) / dt;
      const double yaw_dot = moving ? kGravityMps2 * std::tan(roll) / v : direct_yaw_rate;

      emit(roll_dot, pitch_dot, yaw_dot);

      pos += out.back().vel_ned * dt;
      roll = roll_next;
      pitch = pitch_next;
      yaw = wrap_pi(yaw + yaw_dot * dt);
      ++step_index;
    }
  }
  // final state with the last commanded rates held at zero slew
  const double yaw_dot = moving ? kGravityMps2 * std::tan(roll) / v : direct_yaw_rate;
  emit(0.0, 0.0, yaw_dot);

  // Dynamic acceleration chosen so the forward accelerometer model
  // a = a_dyn + w x v_b - g_b reproduces the discrete velocity history
  // exactly: a_dyn[k] = C_nb (v_ned[k+1]-v_ned[k])/dt - w[k] x v_b[k].
  for (std::size_t k = 0; k + 1 < out.size(); ++k) {
    const Mat3 c_nb = quat_to_dcm(out[k].attitude).transpose();
    const Vec3 v_body = c_nb * out[k].vel_ned;
    const Vec3 a_ned = (out[k + 1].vel_ned - out[k].vel_ned) / dt;
    out[k].accel_dyn_body = c_nb * a_ned - out[k].rates.vec().cross(v_body);
  }
  if (out.size() > 1) out.back().accel_dyn_body = out[out.size() - 2].accel_dyn_body;
  return out;
}

double GaussianRng::uniform01() {
  // 53-bit mantissa draw shifted into (0,1)
  return (static_cast<double>(gen_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

double GaussianRng::next(double sigma) {
  if (sigma == 0.0) return 0.0;
  if (has_spare_) {
    has_spare_ = false;
    return spare_ * sigma;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * kPi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a) * sigma;
}

std::vector<SensorRecord> simulate_sensors(const std::vector<TruthState>& truth,
                                           const SensorErrorModel& err,
                                           const ReferencePair& ref, const LtpOrigin& origin,
                                           const SensorRates& rates) {
  if (truth.size() < 2) throw InvalidInput("simulate_sensors: need at least two truth states");
  const double dt = truth[1].t_s - truth[0].t_s;
  if (std::abs(dt * rates.imu_hz - 1.0) > 1e-9) {
    throw InvalidInput("simulate_sensors: truth stream not sampled at the imu rate");
  }
  const double mag_ratio = rates.imu_hz / rates.mag_hz;
  const auto mag_decim = static_cast<std::size_t>(std::llround(mag_ratio));
  if (std::abs(mag_ratio - static_cast<double>(mag_decim)) > 1e-9 || mag_decim == 0) {
    throw InvalidInput("simulate_sensors: imu rate must be an integer multiple of the mag rate");
  }

  GaussianRng rng(err.seed);
  std::vector<SensorRecord> imu_mag;
  imu_mag.reserve(truth.size() + truth.size() / mag_decim);

  for (std::size_t i = 1; i < truth.size(); ++i) {
    const TruthState& s = truth[i];
    const Mat3 c_nb = quat_to_dcm(s.attitude).transpose();
    const Vec3 g_body = c_nb * Vec3{0.0, 0.0, kGravityMps2};
    const Vec3 v_body = c_nb * s.vel_ned;
    const double vib = err.vibration_amp_mps2 *
                       std::sin(2.0 * kPi * err.vibration_freq_hz * s.t_s);

    SensorRecord imu;
    imu.t_s = s.t_s;
    imu.kind = SensorRecord::Kind::kImu;
    imu.accel_mps2 = s.accel_dyn_body + s.rates.vec().cross(v_body) - g_body;
    for (int a = 0; a < 3; ++a) {
      imu.accel_mps2[a] += vib + rng.next(err.accel_noise_mps2);
    }
    imu.gyro_rps = s.rates.vec() + err.gyro_bias_rps;
    for (int a = 0; a < 3; ++a) imu.gyro_rps[a] += rng.next(err.gyro_noise_rps);
    imu_mag.push_back(imu);

    if (i % mag_decim == 0) {
      SensorRecord mag;
      mag.t_s = s.t_s;
      mag.kind = SensorRecord::Kind::kMag;
      mag.mag = c_nb * ref.mag_ned;
      for (int a = 0; a < 3; ++a) mag.mag[a] += rng.next(err.mag_noise);
      imu_mag.push_back(mag);
    }
  }

  // GPS epochs at k / gps_hz, position and velocity interpolated from the
  // bracketing truth samples.
  std::vector<SensorRecord> gps;
  const double t_end = truth.back().t_s;
  for (std::size_t k = 1;; ++k) {
    const double t = static_cast<double>(k) / rates.gps_hz;
    if (t > t_end + 1e-9) break;
    const double x = (t - truth.front().t_s) * rates.imu_hz;
    auto i0 = static_cast<std::size_t>(std::floor(x + 1e-9));
    if (i0 >= truth.size() - 1) i0 = truth.size() - 2;
    const double alpha = x - static_cast<double>(i0);
    const Vec3 pos = (1.0 - alpha) * truth[i0].pos_ned + alpha * truth[i0 + 1].pos_ned;
    const Vec3 vel = (1.0 - alpha) * truth[i0].vel_ned + alpha * truth[i0 + 1].vel_ned;

    SensorRecord rec;
    rec.t_s = t;
    rec.kind = SensorRecord::Kind::kGps;
    const Geodetic g = ned_to_geodetic(pos, origin);
    rec.lat_deg = g.lat_deg;
    rec.lon_deg = g.lon_deg;
    rec.alt_m = g.alt_m;
    rec.vel_ned_mps = vel;
    for (int a = 0; a < 3; ++a) rec.vel_ned_mps[a] += rng.next(err.gps_vel_noise_mps);
    gps.push_back(rec);
  }

  std::vector<SensorRecord> merged;
  merged.reserve(imu_mag.size() + gps.size());
  std::size_t gi = 0;
  for (const auto& rec : imu_mag) {
    while (gi < gps.size() && gps[gi].t_s < rec.t_s - 1e-12) merged.push_back(gps[gi++]);
    merged.push_back(rec);
  }
  while (gi < gps.size()) merged.push_back(gps[gi++]);
  return merged;
}

namespace {
void append_vec3(std::string& out, const Vec3& v) {
  out += '[';
  append_double(out, v.x());
  out += ',';
  append_double(out, v.y());
  out += ',';
  append_double(out, v.z());
  out += ']';
}
}  // namespace

std::string sensor_record_to_json(const SensorRecord& rec) {
  std::string line = "{\"t_s\":";
  append_double(line, rec.t_s);
  switch (rec.kind) {
    case SensorRecord::Kind::kImu:
      line += ",\"kind\":\"imu\",\"acc\":";
      append_vec3(line, rec.accel_mps2);
      line += ",\"gyro\":";
      append_vec3(line, rec.gyro_rps);
      break;
    case SensorRecord::Kind::kMag:
      line += ",\"kind\":\"mag\",\"mag\":";
      append_vec3(line, rec.mag);
      break;
    case SensorRecord::Kind::kGps:
      line += ",\"kind\":\"gps\",\"lat_deg\":";
      append_double(line, rec.lat_deg);
      line += ",\"lon_deg\":";
      append_double(line, rec.lon_deg);
      line += ",\"alt_m\":";
      append_double(line, rec.alt_m);
      line += ",\"vel_ned\":";
      append_vec3(line, rec.vel_ned_mps);
      break;
  }
  line += '}';
  return line;
}

void write_sensor_log(const std::string& path, const std::vector<SensorRecord>& records) {
  std::string out;
  out.reserve(records.size() * 96);
  for (const auto& rec : records) {
    out += sensor_record_to_json(rec);
    out += '\n';
  }
  write_file(path, out);
}

std::vector<SensorRecord> read_sensor_log(const std::string& path) {
  const auto lines = read_lines(path);
  std::vector<SensorRecord> records;
  records.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::exception& e) {
      throw IoError(path + ":" + std::to_string(i + 1) + ": " + e.what());
    }
    try {
      SensorRecord rec;
      rec.t_s = j.at("t_s").get<double>();
      const std::string kind = j.at("kind").get<std::string>();
      const auto get3 = [&](const char* key) {
        const auto& arr = j.at(key);
        if (!arr.is_array() || arr.size() != 3) throw IoError("expected 3-element array");
        return Vec3{arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>()};
      };
      if (kind == "imu") {
        rec.kind = SensorRecord::Kind::kImu;
        rec.accel_mps2 = get3("acc");
        rec.gyro_rps = get3("gyro");
      } else if (kind == "mag") {
        rec.kind = SensorRecord::Kind::kMag;
        rec.mag = get3("mag");
      } else if (kind == "gps") {
        rec.kind = SensorRecord::Kind::kGps;
        rec.lat_deg = j.at("lat_deg").get<double>();
        rec.lon_deg = j.at("lon_deg").get<double>();
        rec.alt_m = j.at("alt_m").get<double>();
        rec.vel_ned_mps = get3("vel_ned");
      } else {
        throw IoError("unknown record kind '" + kind + "'");
      }
      records.push_back(rec);
    } catch (const nlohmann::json::exception& e) {
      throw IoError(path + ":" + std::to_string(i + 1) + ": " + e.what());
    } catch (const IoError& e) {
      throw IoError(path + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace uavkit
