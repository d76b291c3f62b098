#pragma once

namespace uavkit {

// Second-order low-pass spec for the 250 Hz analog channels. The stock values
// match the anti-vibration front end: 5 Hz cutoff against engine vibration,
// assuming vehicle maneuvers stay below 5 Hz.
struct FilterSpec {
  double cutoff_hz = 5.0;
  double sample_rate_hz = 250.0;
  int order = 2;  // fixed; one biquad section
};

// Direct-form-II-transposed biquad, normalized so the transfer function is
//   H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2).
// Filter state is owned by one channel; distinct channels run independently.
class Biquad {
 public:
  Biquad() = default;
  Biquad(double b0, double b1, double b2, double a1, double a2);

  // Advance the difference equation one sample.
  double step(double x);

  // Prime the delay line so a following constant input x0 passes through as
  // steady state from the first sample (no startup transient).
  void prime(double x0);

  void reset();

  // Transfer-function magnitude at freq_hz for the given sample rate.
  double magnitude(double freq_hz, double sample_rate_hz) const;

  // DC gain (b0+b1+b2)/(1+a1+a2).
  double dc_gain() const;

  // Both poles strictly inside the unit circle.
  bool is_stable() const;

  double b0() const { return b0_; }
  double b1() const { return b1_; }
  double b2() const { return b2_; }
  double a1() const { return a1_; }
  double a2() const { return a2_; }

 private:
  double b0_ = 1.0, b1_ = 0.0, b2_ = 0.0;
  double a1_ = 0.0, a2_ = 0.0;
  double s1_ = 0.0, s2_ = 0.0;
};

// Butterworth low-pass design via bilinear transform with frequency
// pre-warping at the cutoff, so the half-power point lands exactly on
// spec.cutoff_hz. Throws InvalidInput when the cutoff is not inside
// (0, Nyquist).
Biquad design_butterworth(const FilterSpec& spec);

}  // namespace uavkit
