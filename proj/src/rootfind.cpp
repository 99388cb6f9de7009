#include "rodbilliard/rootfind.hpp"

#include "rodbilliard/impact_map.hpp"
#include "rodbilliard/small_angle.hpp"

#include <optional>

namespace rodbilliard {

double delta_equation_residual(double s, double a, double b) {
  return b * s * std::cos(s) - (1.0 + a * s) * std::sin(s);
}

RootResult solve_delta_detailed(double a, double b, const SimConfig& cfg) {
  require_finite(a, "a");
  require_finite(b, "b");
  double beta = b - 1.0;
  double lo = 0.0;
  if (beta > 0.0) {
    // G(0) = b - 1 > 0, so the trivial root s = 0 of F is not a root of G.
  } else if (beta >= -cfg.grazing_tol && a < 0.0) {
    // Grazing departure: G(s) ~ -a s - s^2/3 near 0.
    beta = 0.0;
    lo = std::min(1e-6, 0.1 * std::abs(a));
    if (!(normalized_height(lo, a, b, beta) > 0.0))
      throw DomainError("solve_delta: grazing departure does not lift off the rod");
  } else {
    std::ostringstream os;
    os.precision(17);
    os << "solve_delta: need b > 1, or b = 1 with a < 0; got a=" << a << ", b=" << b;
    throw DomainError(os.str());
  }

  // Leading-order guess from G(s) ~ beta - a s - s^2/3.
  const double disc = std::sqrt(a * a + 4.0 * beta / 3.0);
  const double guess = a >= 0.0 ? 2.0 * beta / (a + disc) : 1.5 * (disc - a);

  auto g = [&](double s) {
    return std::pair{normalized_height(s, a, b, beta), normalized_height_derivative(s, a, b)};
  };
  RootResult res = safeguarded_newton(g, lo, kPi, guess, cfg.root_abs_tol, cfg.root_abs_tol,
                                      cfg.max_bisect_iters);
  res.residual = delta_equation_residual(res.root, a, b);
  if (!(res.root > 0.0 && res.root < kPi) ||
      std::abs(res.residual) > 10.0 * cfg.root_abs_tol * (1.0 + std::abs(a) + b)) {
    std::ostringstream os;
    os.precision(17);
    os << "solve_delta: root " << res.root << " has residual " << res.residual << " (a=" << a
       << ", b=" << b << ")";
    throw NumericError(os.str());
  }
  return res;
}

double solve_delta(double a, double b, const SimConfig& cfg) {
  return solve_delta_detailed(a, b, cfg).root;
}

namespace {

struct Sample {
  double t;
  double h;
};

}  // namespace

FirstImpact first_impact(const FreeFlight& ff, const SimConfig& cfg) {
  cfg.validate();
  require_finite(ff.z, "initial position");
  require_finite(ff.v, "initial velocity");
  const Complex z0 = flight_position(ff, 0.0);
  const Complex zdot0 = flight_velocity(ff, 0.0);
  if (z0.imag() < 0.0 || (z0.imag() == 0.0 && !(zdot0.imag() > 0.0)))
    throw DomainError("first_impact: start must lie above the rod or depart from it");

  if (const auto deg = in_degenerate_set(z0, zdot0, cfg.grazing_tol); deg.member)
    return {deg.tau, deg.r, flight_velocity(ff, deg.tau), ImpactKind::degenerate};

  auto h = [&](double t) { return flight_position(ff, t).imag(); };
  auto h_dh = [&](double t) {
    return std::pair{flight_position(ff, t).imag(), flight_velocity(ff, t).imag()};
  };
  auto dh_d2h = [&](double t) {
    return std::pair{flight_velocity(ff, t).imag(), flight_acceleration(ff, t).imag()};
  };
  auto refine_crossing = [&](double lo, double hi) {
    return safeguarded_newton(h_dh, lo, hi, 0.5 * (lo + hi), cfg.root_abs_tol, 1.0,
                              cfg.max_bisect_iters)
        .root;
  };

  auto finish = [&](double t1) {
    const Complex z1 = flight_position(ff, t1);
    if (!(z1.real() > 0.0)) throw UnsupportedFirstImpact(t1, z1.real());
    const Complex zdot_in = flight_velocity(ff, t1);
    return FirstImpact{t1, z1.real(), zdot_in, classify_impact(z1.real(), zdot_in, cfg)};
  };

  // Local minimum of Im z inside (lo, hi), located as the zero of Im zdot.
  auto minimum_in = [&](double lo, double hi) -> std::optional<double> {
    if (!(flight_velocity(ff, lo).imag() < 0.0 && flight_velocity(ff, hi).imag() > 0.0))
      return std::nullopt;
    return safeguarded_newton(dh_d2h, lo, hi, 0.5 * (lo + hi), cfg.root_abs_tol, 1.0,
                              cfg.max_bisect_iters)
        .root;
  };
  auto touches = [&](double tm) {
    const Complex zm = flight_position(ff, tm);
    return std::abs(zm.imag()) <= cfg.grazing_tol * (1.0 + std::abs(zm));
  };

  const long steps = static_cast<long>(std::ceil(cfg.search_window / cfg.scan_step));
  Sample older{0.0, kInf};
  Sample prev{0.0, z0.imag()};
  for (long k = 1; k <= steps; ++k) {
    const double t = std::min(k * cfg.scan_step, cfg.search_window);
    const Sample now{t, h(t)};

    if (now.h <= 0.0) {
      if (const auto tm = minimum_in(prev.t, now.t + cfg.scan_step); tm && touches(*tm))
        return finish(*tm);
      return finish(now.h == 0.0 ? now.t : refine_crossing(prev.t, now.t));
    }

    // Local minimum at prev: a tangency, or a shallow dip between two samples.
    if (prev.h < older.h && prev.h < now.h) {
      if (const auto tm = minimum_in(older.t, now.t)) {
        if (touches(*tm)) return finish(*tm);
        if (h(*tm) < 0.0) return finish(refine_crossing(older.t, *tm));
      }
    }
    older = prev;
    prev = now;
  }
  throw NumericError("first_impact: no contact with the rod within the search window");
}

double solve_tstar() {
  // t = tan t  <=>  sin t - t cos t = 0, bracketed on (pi, 3 pi / 2).
  auto fn = [](double t) { return std::pair{std::sin(t) - t * std::cos(t), t * std::sin(t)}; };
  return safeguarded_newton(fn, kPi, 1.5 * kPi, 4.5, 1e-15, 1e-15, 100).root;
}

}  // namespace rodbilliard
