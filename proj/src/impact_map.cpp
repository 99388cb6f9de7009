#include "rodbilliard/impact_map.hpp"

#include <array>
#include <sstream>

namespace rodbilliard {

namespace {

std::string dump(const MapState& ms) {
  std::ostringstream os;
  os.precision(17);
  os << "{n=" << ms.n << ", r=" << ms.r << ", a=" << ms.a << ", b=" << ms.b << "}";
  return os.str();
}

double arc_height(const MapState& ms, double s) {
  return ms.r * s * normalized_height(s, ms.a, ms.b, ms.b - 1.0);
}

}  // namespace

MapState incoming_to_map_state(double r, Complex zdot_in, const SimConfig& cfg) {
  if (!(r > 0.0)) throw DomainError("incoming_to_map_state: r must be positive");
  require_finite(zdot_in, "incoming velocity");
  if (std::abs(zdot_in) <= cfg.grazing_tol * (1.0 + r)) throw DegenerateImpact(r);
  MapState ms{r, zdot_in.real() / r, 1.0 - zdot_in.imag() / r, 1};
  if (ms.b < 1.0 - cfg.grazing_tol)
    throw ContractViolation("incoming velocity points away from the rod: " + dump(ms));
  return ms;
}

StepResult step(const MapState& ms, const SimConfig& cfg) {
  const double delta = solve_delta(ms.a, ms.b, cfg);
  const MapUpdate<double> up = delta < cfg.series_switch_delta ? series_update(ms.b, delta)
                                                              : closed_form_update(ms.b, delta);
  StepResult out;
  out.delta = delta;
  out.next = {ms.r * ms.b * up.delta_over_sin, up.a, up.b, ms.n + 1};
  out.height_max = segment_max_height(ms, delta);
  if (!std::isfinite(out.next.r) || !std::isfinite(out.next.a) || !std::isfinite(out.next.b))
    throw NumericError("impact map produced a non-finite state from " + dump(ms));
  return out;
}

Complex outgoing_components(const MapState& ms, double delta) {
  const double beta = ms.b - 1.0;
  const double re = ms.r * (beta + one_minus_sinc(2.0 * delta)) / std::sin(delta);
  const double im =
      -ms.r * (1.0 + x_over_sin_minus_one(delta)) * (beta + one_minus_sinc_squared(delta));
  return {re, im};
}

ImpactKind classify_impact(double r, Complex zdot_in, const SimConfig& cfg) {
  if (!(r > 0.0)) throw DomainError("classify_impact: r must be positive");
  const double speed = std::abs(zdot_in);
  const double tol = cfg.grazing_tol * (1.0 + speed);
  if (speed <= tol * (1.0 + r)) return ImpactKind::degenerate;
  if (zdot_in.imag() < -tol) return ImpactKind::transversal;
  if (std::abs(zdot_in.imag()) <= tol && zdot_in.real() < -tol) return ImpactKind::grazing;
  std::ostringstream os;
  os.precision(17);
  os << "impact at r=" << r << " with incoming velocity (" << zdot_in.real() << ", "
     << zdot_in.imag() << ") is neither transversal, grazing nor degenerate";
  throw ContractViolation(os.str());
}

DegenerateMembership in_degenerate_set(Complex z0, Complex zdot0, double tol) {
  if (zdot0 == Complex(0.0, 0.0)) return {};
  static const double tstar = solve_tstar();
  const Complex q = z0 / zdot0;
  if (!(std::abs(q.imag() - 1.0) <= tol) || !(q.real() < 0.0)) return {};
  const double tau = -1.0 / q.real();
  if (!(tau > 0.0 && tau < tstar)) return {};
  return {true, std::abs(zdot0) / tau, tau};
}

double segment_max_height(const MapState& ms, double delta) {
  constexpr int kScan = 64;
  std::array<double, kScan> h{};
  int best = 0;
  for (int k = 0; k < kScan; ++k) {
    h[k] = arc_height(ms, delta * k / (kScan - 1));
    if (h[k] > h[best]) best = k;
  }
  double lo = delta * std::max(best - 1, 0) / (kScan - 1);
  double hi = delta * std::min(best + 1, kScan - 1) / (kScan - 1);

  constexpr double kInvPhi = 0.6180339887498948482;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = arc_height(ms, x1);
  double f2 = arc_height(ms, x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = arc_height(ms, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = arc_height(ms, x1);
    }
  }
  return std::max({h[best], f1, f2});
}

FlightSegment make_segment(const MapState& ms, double t_start) {
  FlightSegment seg;
  seg.n = ms.n;
  seg.t_start = t_start;
  seg.r = ms.r;
  seg.a = ms.a;
  seg.b = ms.b;
  return seg;
}

}  // namespace rodbilliard
