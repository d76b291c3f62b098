#include "uavkit/fusion.hpp"

#include <cmath>

#include "uavkit/errors.hpp"
#include "uavkit/logio.hpp"

#include "json.hpp"

namespace uavkit {

void FusionState::renormalize_quat() {
  const double n = x.head<4>().norm();
  if (n < 1e-12) throw NumericalError("fusion state quaternion collapsed to zero");
  x.head<4>() /= n;
}

NoiseConfig NoiseConfig::defaults() {
  return from_diagonals(1e-8, 1e-12, 1e-5, 1e-2, 1e-4);
}

NoiseConfig NoiseConfig::from_diagonals(double q_quat, double q_bias, double r_quat,
                                        double p0_quat, double p0_bias) {
  NoiseConfig cfg;
  cfg.q.diagonal() << q_quat, q_quat, q_quat, q_quat, q_bias, q_bias, q_bias;
  cfg.r.diagonal().setConstant(r_quat);
  cfg.p0.diagonal() << p0_quat, p0_quat, p0_quat, p0_quat, p0_bias, p0_bias, p0_bias;
  return cfg;
}

NoiseConfig NoiseConfig::from_file(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_lines(path).empty() ? std::string("{}") : [&] {
      std::string all;
      for (const auto& l : read_lines(path)) {
        all += l;
        all += '\n';
      }
      return all;
    }());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  const NoiseConfig def = defaults();
  const auto pick = [&](const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
  };
  return from_diagonals(pick("q_quat", def.q(0, 0)), pick("q_bias", def.q(4, 4)),
                        pick("r_quat", def.r(0, 0)), pick("p0_quat", def.p0(0, 0)),
                        pick("p0_bias", def.p0(4, 4)));
}

namespace {

// 4x3 quaternion rate matrix Xi(q): qdot = 1/2 Xi(q) w.
Eigen::Matrix<double, 4, 3> xi_matrix(const Vec4& q) {
  Eigen::Matrix<double, 4, 3> xi;
  xi << -q[1], -q[2], -q[3],
         q[0], -q[3],  q[2],
         q[3],  q[0], -q[1],
        -q[2],  q[1],  q[0];
  return xi;
}

}  // namespace

void build_transition(const Vec4& q, double dt_s, Mat7& a, Mat7x3& b) {
  const Eigen::Matrix<double, 4, 3> xi_half_dt = 0.5 * dt_s * xi_matrix(q);
  a.setIdentity();
  a.block<4, 3>(0, 4) = -xi_half_dt;
  b.setZero();
  b.block<4, 3>(0, 0) = xi_half_dt;
}

Mat4x7 measurement_matrix() {
  Mat4x7 h = Mat4x7::Zero();
  h.block<4, 4>(0, 0).setIdentity();
  return h;
}

FusionState time_update(const FusionState& s, const BodyRates& u, const NoiseConfig& cfg,
                        double dt_s) {
  FusionState out = s;
  Mat7 a;
  Mat7x3 b;
  build_transition(s.quat_raw(), dt_s, a, b);

  // State propagation uses the kinematic form directly; it is the same
  // arithmetic as pure rate integration, so disabling measurement updates
  // degenerates to dead reckoning exactly.
  const Vec3 corrected = u.vec() - s.bias_rps();
  out.x.head<4>() = integrate_attitude_raw(s.quat_raw(), corrected, dt_s);

  out.p = a * s.p * a.transpose() + cfg.q;
  out.p = 0.5 * (out.p + out.p.transpose()).eval();
  return out;
}

FusionState measurement_update(const FusionState& s, const AttitudeMeasurement& meas,
                               const NoiseConfig& cfg) {
  Vec4 z = meas.z;
  if (z.dot(s.quat_raw()) < 0.0) z = -z;  // q and -q are the same attitude

  const Eigen::Matrix4d innov_cov = s.p.topLeftCorner<4, 4>() + cfg.r;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(innov_cov);
  const double max_eig = eig.eigenvalues().maxCoeff();
  const double min_eig = eig.eigenvalues().minCoeff();
  if (!(max_eig > 0.0) || min_eig < 1e-14 * max_eig) {
    throw NumericalError("measurement_update: singular innovation covariance");
  }
  const Eigen::Matrix4d s_inv =
      eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
      eig.eigenvectors().transpose();

  const Eigen::Matrix<double, 7, 4> gain = s.p.leftCols<4>() * s_inv;

  FusionState out = s;
  out.x = s.x + gain * (z - s.quat_raw());
  out.p = s.p - gain * s.p.topRows<4>();
  out.p = 0.5 * (out.p + out.p.transpose()).eval();
  out.renormalize_quat();
  return out;
}

namespace {

AhrsLogRecord make_record(double t, const FusionState& s, bool is_meas) {
  AhrsLogRecord rec;
  rec.t_s = t;
  rec.quat = s.quat_raw();
  rec.euler = quat_to_euler(s.quat());
  rec.bias_rps = s.bias_rps();
  rec.is_measurement = is_meas;
  return rec;
}

}  // namespace

AhrsResult run_ahrs(const std::vector<SensorRecord>& records, const NoiseConfig& noise,
                    const AhrsConfig& cfg) {
  const double decim_f = cfg.rates.imu_hz / cfg.rates.update_hz;
  const auto decim = static_cast<std::size_t>(std::llround(decim_f));
  if (decim == 0 || std::abs(decim_f - static_cast<double>(decim)) > 1e-9) {
    throw InvalidInput("run_ahrs: imu rate must be an integer multiple of the update rate");
  }
  const double dt_update = 1.0 / cfg.rates.update_hz;

  const FilterSpec spec{cfg.filter.cutoff_hz, cfg.rates.imu_hz, 2};
  Biquad channels[6];
  for (auto& ch : channels) ch = design_butterworth(spec);
  bool primed = false;

  FusionState state;
  state.p = noise.p0;
  bool seeded = false;

  AhrsResult res;
  res.log.reserve(records.size() / decim + 64);

  Vec3 accel_f = Vec3::Zero(), gyro_f = Vec3::Zero();
  bool have_imu = false;
  Vec3 mag = Vec3::Zero();
  bool have_mag = false;
  double prev_gps_t = 0.0;
  Vec3 prev_v_body = Vec3::Zero();
  bool have_prev_gps = false;

  Eigen::SelfAdjointEigenSolver<Mat7> eig;
  const auto note_health = [&](const Mat7& p) {
    if (!cfg.collect_health) return;
    res.health.any = true;
    res.health.max_asymmetry =
        std::max(res.health.max_asymmetry, (p - p.transpose()).norm());
    eig.compute(p, Eigen::EigenvaluesOnly);
    res.health.min_eigenvalue = res.health.any && res.health.min_eigenvalue < eig.eigenvalues().minCoeff()
                                    ? res.health.min_eigenvalue
                                    : eig.eigenvalues().minCoeff();
  };

  double prev_t = -1e300;
  std::size_t imu_count = 0;
  for (const auto& rec : records) {
    if (rec.t_s < prev_t - 1e-9) {
      throw InvalidInput("run_ahrs: records out of time order at t=" + format_double(rec.t_s));
    }
    prev_t = rec.t_s;

    switch (rec.kind) {
      case SensorRecord::Kind::kImu: {
        if (!primed) {
          for (int a = 0; a < 3; ++a) channels[a].prime(rec.accel_mps2[a]);
          for (int a = 0; a < 3; ++a) channels[3 + a].prime(rec.gyro_rps[a]);
          primed = true;
        }
        for (int a = 0; a < 3; ++a) accel_f[a] = channels[a].step(rec.accel_mps2[a]);
        for (int a = 0; a < 3; ++a) gyro_f[a] = channels[3 + a].step(rec.gyro_rps[a]);
        have_imu = true;
        ++imu_count;
        ++res.imu_samples;
        if (imu_count % decim == 0) {
          state = time_update(state, BodyRates::from_vec(gyro_f), noise, dt_update);
          ++res.time_updates;
          note_health(state.p);
          res.log.push_back(make_record(rec.t_s, state, false));
        }
        break;
      }
      case SensorRecord::Kind::kMag:
        mag = rec.mag;
        have_mag = true;
        break;
      case SensorRecord::Kind::kGps: {
        if (!cfg.measurement_updates) break;
        if (!have_imu || !have_mag) break;

        const Mat3 c_nb_est = quat_to_dcm(state.quat()).transpose();
        const Vec3 v_body = c_nb_est * rec.vel_ned_mps;
        Vec3 a_dyn = Vec3::Zero();
        if (have_prev_gps && rec.t_s > prev_gps_t + 1e-9) {
          a_dyn = (v_body - prev_v_body) / (rec.t_s - prev_gps_t);
        }
        const Vec3 omega = gyro_f - state.bias_rps();
        const GravityVector gv = extract_gravity(
            accel_f, KinematicAiding{BodyRates::from_vec(omega), v_body, a_dyn});

        bool ok = true;
        Vec4 z;
        try {
          const Mat3 c_meas = triad(gv.vec(), mag, cfg.reference);
          z = dcm_to_quat(c_meas).vec();
        } catch (const DegenerateGeometry&) {
          ok = false;
          ++res.rejected_measurements;
        }
        if (ok) {
          if (!seeded) {
            // first absolute fix seeds the attitude; covariance restarts in
            // the quaternion block so the stale identity prior cannot leak in
            state.x.head<4>() = z;
            state.p.topLeftCorner<4, 4>() = noise.p0.topLeftCorner<4, 4>();
            state.p.topRightCorner<4, 3>().setZero();
            state.p.bottomLeftCorner<3, 4>().setZero();
            seeded = true;
          }
          const Vec7 prior_diag = state.p.diagonal();
          state = measurement_update(state, AttitudeMeasurement{z, rec.t_s}, noise);
          ++res.measurement_updates;
          if (cfg.collect_health) {
            res.health.max_diag_increase =
                std::max(res.health.max_diag_increase,
                         (state.p.diagonal() - prior_diag).maxCoeff());
          }
          note_health(state.p);
          res.log.push_back(make_record(rec.t_s, state, true));
        }
        // aiding history uses the freshest attitude estimate
        prev_v_body = quat_to_dcm(state.quat()).transpose() * rec.vel_ned_mps;
        prev_gps_t = rec.t_s;
        have_prev_gps = true;
        break;
      }
    }
  }
  return res;
}

std::vector<AhrsLogRecord> run_dead_reckoning(const std::vector<SensorRecord>& records,
                                              const Quaternion& q0, const AhrsConfig& cfg) {
  const double decim_f = cfg.rates.imu_hz / cfg.rates.update_hz;
  const auto decim = static_cast<std::size_t>(std::llround(decim_f));
  if (decim == 0 || std::abs(decim_f - static_cast<double>(decim)) > 1e-9) {
    throw InvalidInput("run_dead_reckoning: incompatible rates");
  }
  const double dt_update = 1.0 / cfg.rates.update_hz;
  const FilterSpec spec{cfg.filter.cutoff_hz, cfg.rates.imu_hz, 2};
  Biquad channels[3];
  for (auto& ch : channels) ch = design_butterworth(spec);
  bool primed = false;

  Vec4 q = q0.vec();
  Vec3 gyro_f = Vec3::Zero();
  std::vector<AhrsLogRecord> log;
  std::size_t imu_count = 0;
  for (const auto& rec : records) {
    if (rec.kind != SensorRecord::Kind::kImu) continue;
    if (!primed) {
      for (int a = 0; a < 3; ++a) channels[a].prime(rec.gyro_rps[a]);
      primed = true;
    }
    for (int a = 0; a < 3; ++a) gyro_f[a] = channels[a].step(rec.gyro_rps[a]);
    ++imu_count;
    if (imu_count % decim == 0) {
      q = integrate_attitude_raw(q, gyro_f, dt_update);
      AhrsLogRecord out;
      out.t_s = rec.t_s;
      out.quat = q;
      out.euler = quat_to_euler(Quaternion::from_vec(q));
      out.bias_rps = Vec3::Zero();
      out.is_measurement = false;
      log.push_back(out);
    }
  }
  return log;
}

void write_attitude_log(const std::string& path, const std::vector<AhrsLogRecord>& log) {
  std::string out = "t_s,e0,e1,e2,e3,roll_deg,pitch_deg,yaw_deg,bp_rps,bq_rps,br_rps,kind\n";
  out.reserve(out.size() + log.size() * 96);
  for (const auto& rec : log) {
    append_double(out, rec.t_s);
    for (int i = 0; i < 4; ++i) {
      out += ',';
      append_double(out, rec.quat[i]);
    }
    out += ',';
    append_double(out, rad2deg(rec.euler.roll_rad));
    out += ',';
    append_double(out, rad2deg(rec.euler.pitch_rad));
    out += ',';
    append_double(out, rad2deg(rec.euler.yaw_rad));
    for (int i = 0; i < 3; ++i) {
      out += ',';
      append_double(out, rec.bias_rps[i]);
    }
    out += rec.is_measurement ? ",measurement\n" : ",time\n";
  }
  write_file(path, out);
}

std::vector<AhrsLogRecord> read_attitude_log(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw IoError(path + ": empty attitude log");
  std::vector<AhrsLogRecord> log;
  log.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_csv(lines[i]);
    if (f.size() != 12) {
      throw IoError(path + ":" + std::to_string(i + 1) + ": expected 12 fields");
    }
    AhrsLogRecord rec;
    rec.t_s = parse_double_field(f[0], path, i + 1);
    for (int k = 0; k < 4; ++k) rec.quat[k] = parse_double_field(f[1 + k], path, i + 1);
    rec.euler.roll_rad = deg2rad(parse_double_field(f[5], path, i + 1));
    rec.euler.pitch_rad = deg2rad(parse_double_field(f[6], path, i + 1));
    rec.euler.yaw_rad = deg2rad(parse_double_field(f[7], path, i + 1));
    for (int k = 0; k < 3; ++k) rec.bias_rps[k] = parse_double_field(f[8 + k], path, i + 1);
    rec.is_measurement = (f[11] == "measurement");
    log.push_back(rec);
  }
  return log;
}

}  // namespace uavkit
