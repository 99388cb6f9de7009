#include "rodbilliard/oracle.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "rodbilliard/flight.hpp"
#include "rodbilliard/rootfind.hpp"
#include "rodbilliard/simulator.hpp"

namespace rodbilliard {

namespace {

// Free flight written around its last anchor time: lab position P at t_a,
// lab velocity V, so z(t) = (P + V (t - t_a)) e^{-it}. Same motion as
// FreeFlight{P - V t_a, V}, without the cancellation in P - V t_a once
// t_a and |V| are large.
struct AnchoredFlight {
  Complex p;
  Complex v;
  double t_a = 0.0;

  [[nodiscard]] Complex lab(double t) const { return p + v * (t - t_a); }
  [[nodiscard]] Complex position(double t) const { return lab(t) * unit_rotation(-t); }
  [[nodiscard]] Complex velocity(double t) const {
    return (v - Complex(0.0, 1.0) * lab(t)) * unit_rotation(-t);
  }
};

double bisect_crossing(const AnchoredFlight& ff, double lo, double hi, const SimConfig& cfg) {
  // Invariant: Im z(lo) > 0 >= Im z(hi).
  for (int it = 0; it < cfg.max_bisect_iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= std::max(cfg.root_abs_tol, 4.0 * kEps * hi) || mid == lo || mid == hi)
      return mid;
    if (ff.position(mid).imag() > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::string describe(const char* what, long n, double t) {
  std::ostringstream os;
  os.precision(17);
  os << "oracle: " << what << " at impact " << n << " (t=" << t << ")";
  return os.str();
}

}  // namespace

std::vector<OracleImpact> oracle_simulate(Complex z0, Complex v0, long n_impacts,
                                          const SimConfig& cfg) {
  cfg.validate();
  AnchoredFlight ff{z0, v0, 0.0};
  std::vector<OracleImpact> out;
  out.reserve(static_cast<std::size_t>(std::max(n_impacts, 0L)));

  const double guard = 10.0 * cfg.scan_step;
  double t_from = 0.0;
  while (static_cast<long>(out.size()) < n_impacts) {
    const long n = static_cast<long>(out.size()) + 1;
    double lo = out.empty() ? 0.0 : t_from + guard;
    if (!out.empty() && !(ff.position(lo).imag() > 0.0))
      throw OracleError(describe("next hit falls inside the lift-off guard", n, lo));

    const long steps = static_cast<long>(std::ceil(cfg.search_window / cfg.scan_step));
    const double origin = lo;
    double hit = -1.0;
    for (long k = 1; k <= steps; ++k) {
      const double hi = origin + k * cfg.scan_step;
      if (ff.position(hi).imag() <= 0.0) {
        hit = bisect_crossing(ff, lo, hi, cfg);
        break;
      }
      lo = hi;
    }
    if (hit < 0.0) throw OracleError(describe("no crossing found in the search window", n, t_from));

    const double r = ff.position(hit).real();
    if (!(r > 0.0)) throw OracleError(describe("crossing on the non-positive semiaxis", n, hit));
    if (!out.empty() && !(r > out.back().r))
      throw OracleError(describe("radius did not grow (missed impact?)", n, hit));
    out.push_back({hit, r});

    // Re-anchor: the reflected flight passes through (r, 0) at time `hit` with
    // rotating velocity conj(zdot_in), i.e. lab velocity (zdot_out + i r) e^{i hit}.
    const Complex zdot_out = reflect(ff.velocity(hit));
    ff = AnchoredFlight{to_lab_frame(Complex(r, 0.0), hit), to_lab_frame(zdot_out + Complex(0.0, r), hit), hit};
    t_from = hit;
  }
  return out;
}

bool OracleComparisonRow::within_tolerance(double tol) const {
  const double bound = tol * (1.0 + t_oracle);
  return std::abs(t_map - t_oracle) < bound && std::abs(r_map - r_oracle) < bound;
}

std::vector<OracleComparisonRow> compare_with_map(Complex z0, Complex v0, long n,
                                                  const SimConfig& cfg) {
  SimConfig map_cfg = cfg;
  map_cfg.n_max = n;
  map_cfg.t_max = kInf;
  const TrajectoryRecord rec = simulate(z0, v0, map_cfg);
  if (static_cast<long>(rec.impacts.size()) < n)
    throw OracleError("impact map stopped after " + std::to_string(rec.impacts.size()) +
                      " impacts (" + to_string(rec.termination) + ")");
  const std::vector<OracleImpact> ref = oracle_simulate(z0, v0, n, cfg);

  std::vector<OracleComparisonRow> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    rows.push_back({k + 1, rec.impacts[i].t, ref[i].t, rec.impacts[i].r, ref[i].r});
  }
  return rows;
}

std::vector<InitialCondition> random_supported_starts(std::size_t count, std::uint64_t seed,
                                                      const SimConfig& cfg) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-2.0, 2.0);
  std::uniform_real_distribution<double> im(0.1, 5.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<InitialCondition> out;
  out.reserve(count);
  while (out.size() < count) {
    const Complex z0(re(rng), im(rng));
    const double rad = 5.0 * std::sqrt(unit(rng));
    const Complex v0 = rad * unit_rotation(2.0 * kPi * unit(rng));
    try {
      const FirstImpact hit = first_impact(FreeFlight{z0, v0}, cfg);
      if (hit.kind == ImpactKind::transversal) out.push_back({z0, v0});
    } catch (const Error&) {
      // unsupported or not found: rejected by construction of the suite
    }
  }
  return out;
}

}  // namespace rodbilliard
