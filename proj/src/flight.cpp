#include "rodbilliard/flight.hpp"

#include <string>

#include "rodbilliard/small_angle.hpp"

namespace rodbilliard {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_arc_range(const FlightSegment& seg, double s) {
  if (!(s >= 0.0) || (seg.delta && s > *seg.delta))
    throw RangeError("segment parameter s=" + std::to_string(s) + " outside the arc of segment " +
                     std::to_string(seg.n));
}

}  // namespace

Complex flight_position(const FreeFlight& ff, double t) {
  return (ff.z + ff.v * t) * unit_rotation(-t);
}

Complex flight_velocity(const FreeFlight& ff, double t) {
  return (ff.v - kI * (ff.z + ff.v * t)) * unit_rotation(-t);
}

Complex flight_acceleration(const FreeFlight& ff, double t) {
  return (-2.0 * kI * ff.v - (ff.z + ff.v * t)) * unit_rotation(-t);
}

Complex segment_position(const FlightSegment& seg, double s) {
  check_arc_range(seg, s);
  const double re = seg.r * ((1.0 + seg.a * s) * std::cos(s) + seg.b * s * std::sin(s));
  const double im = seg.r * s * normalized_height(s, seg.a, seg.b, seg.b - 1.0);
  return {re, im};
}

Complex segment_velocity(const FlightSegment& seg, double s) {
  check_arc_range(seg, s);
  const double c = std::cos(s);
  const double sn = std::sin(s);
  const double p = seg.a + seg.b * s;
  const double q = (seg.b - 1.0) - seg.a * s;
  return {seg.r * (p * c + q * sn), seg.r * (q * c - p * sn)};
}

FreeFlight to_free_flight(const FlightSegment& seg) {
  const Complex anchor = seg.r * unit_rotation(seg.t_start);
  const Complex w = seg.w();
  return {anchor * (1.0 - w * seg.t_start), anchor * w};
}

}  // namespace rodbilliard
