#pragma once

#include <cmath>
#include <sstream>
#include <tuple>
#include <utility>

#include "rodbilliard/core.hpp"
#include "rodbilliard/flight.hpp"

namespace rodbilliard {

struct RootResult {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool bracketed = false;
};

/// Newton iteration safeguarded by bisection on a sign-change bracket [lo, hi].
///
/// `f(x)` returns {value, derivative}. A Newton step is taken only when it
/// lands inside the current bracket and shrinks the residual fast enough;
/// otherwise the bracket is halved. Iteration stops once the last step is
/// below max(min(abs_tol, rel_tol*|x|), 2 ulp).
///
/// Throws DomainError when f(lo), f(hi) have the same strict sign and
/// NumericError after `max_iter` iterations.
template <class Fn>
RootResult safeguarded_newton(Fn&& f, double lo, double hi, double guess, double abs_tol,
                              double rel_tol, int max_iter) {
  const auto [flo, dlo] = f(lo);
  const auto [fhi, dhi] = f(hi);
  (void)dlo;
  (void)dhi;
  if (flo == 0.0) return {lo, 0.0, 0, true};
  if (fhi == 0.0) return {hi, 0.0, 0, true};
  if ((flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "root not bracketed on [" << lo << ", " << hi << "]: f=" << flo << ", " << fhi;
    throw DomainError(os.str());
  }
  // Orient so that f(xl) < 0 < f(xh).
  double xl = flo < 0.0 ? lo : hi;
  double xh = flo < 0.0 ? hi : lo;

  double x = (guess > std::min(lo, hi) && guess < std::max(lo, hi)) ? guess : 0.5 * (lo + hi);
  double dx_old = std::abs(hi - lo);
  double dx = dx_old;
  auto [fx, dfx] = f(x);

  auto tolerance = [&](double at) {
    return std::max(std::min(abs_tol, rel_tol * std::abs(at)), 2.0 * kEps * std::abs(at));
  };

  for (int it = 1; it <= max_iter; ++it) {
    if (fx == 0.0) return {x, 0.0, it, true};
    const bool newton_leaves = ((x - xh) * dfx - fx) * ((x - xl) * dfx - fx) > 0.0;
    const bool newton_slow = std::abs(2.0 * fx) > std::abs(dx_old * dfx);
    if (newton_leaves || newton_slow) {
      dx_old = dx;
      dx = 0.5 * (xh - xl);
      x = xl + dx;
    } else {
      dx_old = dx;
      dx = fx / dfx;
      x -= dx;
    }
    std::tie(fx, dfx) = f(x);
    if (std::abs(dx) <= tolerance(x) || std::abs(xh - xl) <= tolerance(x)) return {x, fx, it, true};
    if (fx < 0.0)
      xl = x;
    else
      xh = x;
  }
  std::ostringstream os;
  os.precision(17);
  os << "safeguarded Newton did not converge in " << max_iter << " iterations; last x=" << x
     << " f=" << fx << " bracket=[" << std::min(xl, xh) << ", " << std::max(xl, xh) << "]";
  throw NumericError(os.str());
}

/// Smallest positive root delta in (0, pi) of
///   F(s) = b s cos s - (1 + a s) sin s,
/// i.e. the time until the arc r(1 + (a+ib)s)e^{-is} returns to the rod.
/// Requires b > 1, or b = 1 (within grazing_tol) with a < 0.
RootResult solve_delta_detailed(double a, double b, const SimConfig& cfg);
double solve_delta(double a, double b, const SimConfig& cfg);

/// Product-form residual F(s) = b s cos s - (1 + a s) sin s.
double delta_equation_residual(double s, double a, double b);

struct FirstImpact {
  double t = 0.0;
  double r = 0.0;
  Complex zdot_in;
  ImpactKind kind = ImpactKind::transversal;
};

/// First time t > 0 at which the free flight meets the rod.
///
/// Exact members of the degenerate set are recognised analytically and
/// reported with their exact hit (tau, r). Otherwise Im z(t) is scanned with
/// step cfg.scan_step over (0, cfg.search_window]; sign changes are refined
/// by safeguarded Newton and local minima of Im z are refined to the zero of
/// Im zdot to catch tangential contacts that do not change sign.
///
/// Throws UnsupportedFirstImpact if the hit is at r <= 0, DomainError if the
/// start lies below the rod, NumericError if nothing is found in the window.
FirstImpact first_impact(const FreeFlight& ff, const SimConfig& cfg);

/// Smallest positive solution of t = tan t (about 4.49341).
double solve_tstar();

}  // namespace rodbilliard
