#pragma once

#include <optional>

#include "rodbilliard/core.hpp"

namespace rodbilliard {

/// Free motion z(t) = (z + v t) e^{-it} in the frame co-rotating with the rod.
/// `z` and `v` are the lab-frame intercept and (constant) lab-frame velocity.
struct FreeFlight {
  Complex z;
  Complex v;

  /// Flight passing through rotating-frame state (z0, zdot0) at t = 0.
  static FreeFlight from_state(Complex z0, Complex zdot0) {
    return {z0, zdot0 + Complex(0.0, 1.0) * z0};
  }
};

/// One arc between impacts, f(s) = r (1 + (a + ib) s) e^{-is}, s = t - t_start.
struct FlightSegment {
  long n = 0;
  double t_start = 0.0;
  double r = 0.0;
  double a = 0.0;
  double b = 0.0;
  /// Length of the arc; empty for the open arc after the last computed impact.
  std::optional<double> delta;
  /// Maximum height of the arc above the rod, when computed.
  std::optional<double> height_max;

  [[nodiscard]] Complex w() const { return {a, b}; }
};

Complex flight_position(const FreeFlight& ff, double t);
Complex flight_velocity(const FreeFlight& ff, double t);
Complex flight_acceleration(const FreeFlight& ff, double t);

/// Elastic reflection off the real axis: complex conjugation.
inline Complex reflect(Complex zdot_in) { return std::conj(zdot_in); }

/// Rotating-frame point to the resting frame at time t.
inline Complex to_lab_frame(Complex z_rot, double t) { return z_rot * unit_rotation(t); }

/// Position on the arc. The imaginary part uses the cancellation-safe form
/// r s G(s), so tiny arcs keep full relative precision.
/// Throws RangeError for s < 0 or s > delta.
Complex segment_position(const FlightSegment& seg, double s);
Complex segment_velocity(const FlightSegment& seg, double s);

/// FreeFlight (absolute time) that coincides with the arc on its interval.
FreeFlight to_free_flight(const FlightSegment& seg);

}  // namespace rodbilliard
