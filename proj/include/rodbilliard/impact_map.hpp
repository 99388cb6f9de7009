#pragma once

#include <cmath>

#include "rodbilliard/core.hpp"
#include "rodbilliard/flight.hpp"
#include "rodbilliard/rootfind.hpp"
#include "rodbilliard/small_angle.hpp"

namespace rodbilliard {

struct ImpactEvent {
  long n = 0;
  double t = 0.0;
  double r = 0.0;
  Complex zdot_in;   // velocity just before the hit
  Complex zdot_out;  // reflect(zdot_in)
  ImpactKind kind = ImpactKind::transversal;
};

/// Parameters of the arc leaving impact n: r_n and w_n = a_n + i b_n.
struct MapState {
  double r = 0.0;
  double a = 0.0;
  double b = 0.0;
  long n = 1;
};

/// a = Re(zdot_in) / r, b = 1 - Im(zdot_in) / r.
/// Throws DegenerateImpact when |zdot_in| <= grazing_tol (1 + r) and
/// ContractViolation when the ball would be leaving the rod (b < 1).
MapState incoming_to_map_state(double r, Complex zdot_in, const SimConfig& cfg);

/// The three quantities the map advances: r_{n+1} / (r_n b_n) = delta / sin delta,
/// a_{n+1} and b_{n+1}.
template <class T>
struct MapUpdate {
  T delta_over_sin;
  T a;
  T b;
};

/// Closed forms exactly as derived:
///   a' = 1/delta - cos(delta) sin(delta) / (b delta^2),
///   b' = 2 - (sin(delta)/delta)^2 / b.
/// The a' line cancels two O(1/delta) terms; use only away from delta = 0.
template <class T>
MapUpdate<T> closed_form_update(T b, T delta) {
  const T s = std::sin(delta);
  const T c = std::cos(delta);
  const T sd = s / delta;
  return {delta / s, T(1) / delta - c * s / (b * delta * delta), T(2) - sd * sd / b};
}

/// Same update rearranged so that no large terms cancel; the trigonometric
/// differences are evaluated by Taylor series. Valid for delta < 1/2.
///   a' = [(b - 1) + (1 - sinc 2 delta)] / (b delta)
///   b' = 1 + [(b - 1) + (1 - sinc^2 delta)] / b
template <class T>
MapUpdate<T> series_update(T b, T delta) {
  const T beta = b - T(1);
  return {T(1) + x_over_sin_minus_one(delta), (beta + one_minus_sinc(T(2) * delta)) / (b * delta),
          T(1) + (beta + one_minus_sinc_squared(delta)) / b};
}

/// a' in the form (a cos d + b sin d) / ((1 + a d) cos d + b d sin d); equal to
/// the closed form whenever delta solves the return equation for (a, b).
inline double next_a_ratio_form(double a, double b, double delta) {
  const double c = std::cos(delta);
  const double s = std::sin(delta);
  return (a * c + b * s) / ((1.0 + a * delta) * c + b * delta * s);
}

struct StepResult {
  double delta = 0.0;
  MapState next;
  double height_max = 0.0;
};

/// Advance one impact. Below cfg.series_switch_delta the series form of the
/// update is used, the closed form above it.
StepResult step(const MapState& ms, const SimConfig& cfg);

/// Rotating-frame velocity just before the next impact, zdot(t_{n+1} - 0):
///   Re = r (b / sin d - cos d / d),  Im = r (sin d / d - b d / sin d),
/// evaluated in a rearranged form without O(1/d) cancellation.
Complex outgoing_components(const MapState& ms, double delta);

/// Degenerate (|zdot| tiny), transversal (Im < 0) or grazing (Im = 0, Re < 0).
/// Anything else throws ContractViolation.
ImpactKind classify_impact(double r, Complex zdot_in, const SimConfig& cfg);

struct DegenerateMembership {
  bool member = false;
  double r = 0.0;
  double tau = 0.0;
};

/// Membership of the rotating-frame initial state (z0, zdot0) in the set
/// { r (1 - i tau, -tau) e^{i tau} : r > 0, 0 < tau < t* } of starts whose
/// first contact has zero velocity. Uses z0/zdot0 = -1/tau + i.
DegenerateMembership in_degenerate_set(Complex z0, Complex zdot0, double tol = 1e-10);

/// max over s in [0, delta] of Im f(s): 64-point scan, then golden-section.
double segment_max_height(const MapState& ms, double delta);

/// MapState <-> FlightSegment bookkeeping.
FlightSegment make_segment(const MapState& ms, double t_start);

}  // namespace rodbilliard
