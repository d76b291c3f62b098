#include "uavkit/iir.hpp"

#include <cmath>
#include <complex>

#include "uavkit/attitude.hpp"
#include "uavkit/errors.hpp"

namespace uavkit {

Biquad::Biquad(double b0, double b1, double b2, double a1, double a2)
    : b0_(b0), b1_(b1), b2_(b2), a1_(a1), a2_(a2) {}

double Biquad::step(double x) {
  const double y = b0_ * x + s1_;
  s1_ = b1_ * x - a1_ * y + s2_;
  s2_ = b2_ * x - a2_ * y;
  return y;
}

void Biquad::prime(double x0) {
  // Steady-state delay-line contents for constant input x0 (unit DC gain).
  s1_ = (b1_ + b2_ - a1_ - a2_) * x0;
  s2_ = (b2_ - a2_) * x0;
}

void Biquad::reset() {
  s1_ = 0.0;
  s2_ = 0.0;
}

double Biquad::magnitude(double freq_hz, double sample_rate_hz) const {
  const std::complex<double> z = std::polar(1.0, -2.0 * kPi * freq_hz / sample_rate_hz);
  const std::complex<double> num = b0_ + z * (b1_ + z * b2_);
  const std::complex<double> den = 1.0 + z * (a1_ + z * a2_);
  return std::abs(num / den);
}

double Biquad::dc_gain() const { return (b0_ + b1_ + b2_) / (1.0 + a1_ + a2_); }

bool Biquad::is_stable() const {
  // Jury criterion for z^2 + a1 z + a2.
  return std::abs(a2_) < 1.0 && std::abs(a1_) < 1.0 + a2_;
}

Biquad design_butterworth(const FilterSpec& spec) {
  if (spec.order != 2) throw InvalidInput("design_butterworth: only order 2 is supported");
  if (!(spec.sample_rate_hz > 0.0) || !(spec.cutoff_hz > 0.0) ||
      spec.cutoff_hz >= spec.sample_rate_hz / 2.0) {
    throw InvalidInput("design_butterworth: cutoff must lie in (0, Nyquist)");
  }
  // Pre-warped bilinear transform of s^2 + sqrt(2) s + 1 (normalized analog
  // prototype), with K = tan(pi fc / fs).
  const double k = std::tan(kPi * spec.cutoff_hz / spec.sample_rate_hz);
  const double k2 = k * k;
  const double sqrt2 = std::sqrt(2.0);
  const double norm = 1.0 + sqrt2 * k + k2;
  return Biquad(k2 / norm, 2.0 * k2 / norm, k2 / norm,
                2.0 * (k2 - 1.0) / norm, (1.0 - sqrt2 * k + k2) / norm);
}

}  // namespace uavkit
