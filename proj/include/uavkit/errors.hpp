#pragma once

#include <stdexcept>
#include <string>

namespace uavkit {

// Bad argument values (non-unit axis, invalid filter spec, malformed config ...).
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Operation evaluated too close to a kinematic singularity (pitch near +/-90 deg).
struct SingularityError : std::domain_error {
  using std::domain_error::domain_error;
};

// Vector geometry does not determine a solution (collinear reference pair, ...).
struct DegenerateGeometry : std::domain_error {
  using std::domain_error::domain_error;
};

// Magnetic vector has no horizontal component in the level frame.
struct IndeterminateHeading : std::domain_error {
  using std::domain_error::domain_error;
};

// Measurement outside the physically representable range.
struct InvalidMeasurement : std::domain_error {
  using std::domain_error::domain_error;
};

// Numerically degenerate linear algebra (singular innovation covariance, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File IO and parse failures; the message carries the offending line number.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace uavkit
