#include "rodbilliard/simulator.hpp"

#include <algorithm>
#include <sstream>

namespace rodbilliard {

namespace {

void end_at_degenerate(TrajectoryRecord& rec, double r, double t, const SimConfig& cfg) {
  if (cfg.quasi_mode == QuasiMode::extend) {
    rec.termination = Termination::degenerate_quasi;
    rec.quasi_start = QuasiTrajectory{r, t};
  } else {
    rec.termination = Termination::degenerate_stop;
  }
}

std::string state_dump(const MapState& ms, double delta, Complex zdot_in) {
  std::ostringstream os;
  os.precision(17);
  os << "impact map left its proven domain after n=" << ms.n << " (r=" << ms.r << ", a=" << ms.a
     << ", b=" << ms.b << ", delta=" << delta << "): incoming velocity (" << zdot_in.real() << ", "
     << zdot_in.imag() << ")";
  return os.str();
}

}  // namespace

std::string to_string(Termination t) {
  switch (t) {
    case Termination::reached_n_max:
      return "reached_n_max";
    case Termination::reached_t_max:
      return "reached_t_max";
    case Termination::unsupported_first_impact:
      return "unsupported_first_impact";
    case Termination::degenerate_stop:
      return "degenerate_stop";
    case Termination::degenerate_quasi:
      return "degenerate_quasi";
  }
  return "unknown";
}

Termination termination_from_string(const std::string& s) {
  for (auto t : {Termination::reached_n_max, Termination::reached_t_max,
                 Termination::unsupported_first_impact, Termination::degenerate_stop,
                 Termination::degenerate_quasi})
    if (to_string(t) == s) return t;
  throw DomainError("unknown termination '" + s + "'");
}

Complex quasi_position(const QuasiTrajectory& q, double t) {
  if (t < q.t1) throw RangeError("quasi-trajectory is defined only for t >= t1");
  return {q.r * std::cosh(t - q.t1), 0.0};
}

Complex quasi_velocity(const QuasiTrajectory& q, double t) {
  if (t < q.t1) throw RangeError("quasi-trajectory is defined only for t >= t1");
  return {q.r * std::sinh(t - q.t1), 0.0};
}

TrajectoryRecord simulate(Complex z0, Complex v0, const SimConfig& cfg) {
  cfg.validate();
  require_finite(z0, "z0");
  require_finite(v0, "v0");

  TrajectoryRecord rec;
  rec.z0 = z0;
  rec.v0 = v0;

  FirstImpact first;
  try {
    first = first_impact(rec.initial_flight(), cfg);
  } catch (const UnsupportedFirstImpact& e) {
    rec.termination = Termination::unsupported_first_impact;
    rec.unsupported_hit = FirstHit{e.t1, e.r1};
    return rec;
  }
  if (first.t > cfg.t_max) {
    rec.termination = Termination::reached_t_max;
    return rec;
  }
  rec.impacts.push_back({1, first.t, first.r, first.zdot_in, reflect(first.zdot_in), first.kind});
  if (first.kind == ImpactKind::degenerate) {
    end_at_degenerate(rec, first.r, first.t, cfg);
    return rec;
  }

  MapState ms = incoming_to_map_state(first.r, first.zdot_in, cfg);
  CompensatedSum clock(first.t);
  for (;;) {
    const double t_now = clock.value();
    if (static_cast<long>(rec.impacts.size()) >= cfg.n_max) {
      rec.segments.push_back(make_segment(ms, t_now));
      rec.termination = Termination::reached_n_max;
      return rec;
    }
    const StepResult st = step(ms, cfg);
    if (t_now + st.delta > cfg.t_max) {
      rec.segments.push_back(make_segment(ms, t_now));
      rec.termination = Termination::reached_t_max;
      return rec;
    }
    FlightSegment seg = make_segment(ms, t_now);
    seg.delta = st.delta;
    seg.height_max = st.height_max;
    rec.segments.push_back(seg);

    const double t_hit = clock.add(st.delta);
    const Complex zdot_in = outgoing_components(ms, st.delta);
    if (!(zdot_in.imag() < 0.0) || !(st.next.b > 1.0))
      throw ContractViolation(state_dump(ms, st.delta, zdot_in));

    ImpactKind kind = classify_impact(st.next.r, zdot_in, cfg);
    if (kind == ImpactKind::grazing) {
      std::ostringstream os;
      os.precision(17);
      os << "impact " << st.next.n << " is within grazing tolerance (Im zdot=" << zdot_in.imag()
         << "); treated as transversal";
      rec.warnings.push_back(os.str());
      kind = ImpactKind::transversal;
    }
    rec.impacts.push_back({st.next.n, t_hit, st.next.r, zdot_in, reflect(zdot_in), kind});
    if (kind == ImpactKind::degenerate) {
      rec.segments.pop_back();
      end_at_degenerate(rec, st.next.r, t_hit, cfg);
      return rec;
    }
    ms = st.next;
  }
}

PhaseState state_at(const TrajectoryRecord& rec, double t) {
  if (t < 0.0) throw RangeError("state_at: t must be >= 0");
  if (rec.impacts.empty() || t < rec.impacts.front().t) {
    const FreeFlight ff = rec.initial_flight();
    return {t, flight_position(ff, t), flight_velocity(ff, t)};
  }
  const bool degenerate = rec.termination == Termination::degenerate_stop ||
                          rec.termination == Termination::degenerate_quasi;
  if (degenerate && t >= rec.impacts.back().t) {
    const ImpactEvent& last = rec.impacts.back();
    if (rec.quasi_start)
      return {t, quasi_position(*rec.quasi_start, t), quasi_velocity(*rec.quasi_start, t)};
    if (t == last.t) return {t, Complex(last.r, 0.0), last.zdot_in};
    throw RangeError("state_at: the trajectory cannot be continued past a degenerate impact");
  }
  if (rec.segments.empty()) throw RangeError("state_at: record has no arc covering t");
  auto it = std::upper_bound(rec.segments.begin(), rec.segments.end(), t,
                             [](double x, const FlightSegment& s) { return x < s.t_start; });
  const FlightSegment& seg = *std::prev(it);
  double s = t - seg.t_start;
  if (seg.delta) s = std::min(s, *seg.delta);
  return {t, segment_position(seg, s), segment_velocity(seg, s)};
}

double covered_until(const TrajectoryRecord& rec, const SimConfig& cfg) {
  switch (rec.termination) {
    case Termination::unsupported_first_impact:
      return rec.unsupported_hit ? rec.unsupported_hit->t : 0.0;
    case Termination::degenerate_stop:
      return rec.impacts.back().t;
    case Termination::degenerate_quasi:
    case Termination::reached_t_max:
      return cfg.t_max;
    case Termination::reached_n_max: {
      const FlightSegment& open = rec.segments.back();
      return open.t_start + solve_delta(open.a, open.b, cfg);
    }
  }
  return 0.0;
}

Complex degenerate_start(double r, double tau) {
  return r * Complex(1.0, -tau) * unit_rotation(tau);
}

Complex degenerate_lab_velocity(double r, double tau) {
  return Complex(0.0, r) * unit_rotation(tau);
}

ConvergenceTable convergence_experiment(double r, double t1, const std::vector<double>& epsilons,
                                        double horizon, const SimConfig& cfg) {
  static const double tstar = solve_tstar();
  if (!(r > 0.0) || !(t1 > 0.0 && t1 < tstar))
    throw DomainError("convergence_experiment: need r > 0 and 0 < t1 < t*");
  if (!(horizon > 0.0)) throw DomainError("convergence_experiment: horizon must be positive");

  ConvergenceTable table;
  table.r = r;
  table.t1 = t1;
  table.horizon = horizon;
  table.grid_points = 1000;
  table.perturbation = "lab velocity scaled by (1+eps), z0 fixed";

  const Complex z0 = degenerate_start(r, t1);
  const FreeFlight reference{z0, degenerate_lab_velocity(r, t1)};
  const QuasiTrajectory quasi{r, t1};

  SimConfig run_cfg = cfg;
  run_cfg.t_max = horizon;
  for (double eps : epsilons) {
    const TrajectoryRecord rec = simulate(z0, reference.v * (1.0 + eps), run_cfg);
    ConvergenceRow row;
    row.epsilon = eps;
    row.termination = rec.termination;
    row.impacts = static_cast<long>(rec.impacts.size());
    const double limit = std::min(covered_until(rec, run_cfg), horizon);
    for (int k = 0; k < table.grid_points; ++k) {
      const double t = horizon * k / (table.grid_points - 1);
      if (t > limit) break;
      const PhaseState st = state_at(rec, t);
      const Complex z_ref = t <= t1 ? flight_position(reference, t) : quasi_position(quasi, t);
      const Complex v_ref = t <= t1 ? flight_velocity(reference, t) : quasi_velocity(quasi, t);
      row.sup_position = std::max(row.sup_position, std::abs(st.z - z_ref));
      row.sup_velocity = std::max(row.sup_velocity, std::abs(st.zdot - v_ref));
      row.compared_until = t;
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace rodbilliard
