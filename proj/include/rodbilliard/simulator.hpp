#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rodbilliard/core.hpp"
#include "rodbilliard/flight.hpp"
#include "rodbilliard/impact_map.hpp"

namespace rodbilliard {

enum class Termination {
  reached_n_max,
  reached_t_max,
  unsupported_first_impact,
  degenerate_stop,
  degenerate_quasi,
};

std::string to_string(Termination t);
Termination termination_from_string(const std::string& s);

/// Sliding continuation past a degenerate hit: x(t) = r cosh(t - t1) on the rod.
struct QuasiTrajectory {
  double r = 0.0;
  double t1 = 0.0;
};

/// Position (r cosh(t - t1), 0). Throws RangeError for t < t1.
Complex quasi_position(const QuasiTrajectory& q, double t);
Complex quasi_velocity(const QuasiTrajectory& q, double t);

struct FirstHit {
  double t = 0.0;
  double r = 0.0;
};

/// Everything simulate() knows about one trajectory.
///
/// segments[k] is the arc leaving impacts[k]; the last segment is open
/// (no delta) unless the run ended at a degenerate hit, in which case there
/// are no segments. Before impacts[0] the motion is FreeFlight{z0, v0}.
struct TrajectoryRecord {
  Complex z0;
  Complex v0;
  std::vector<ImpactEvent> impacts;
  std::vector<FlightSegment> segments;
  Termination termination = Termination::reached_n_max;
  std::optional<QuasiTrajectory> quasi_start;
  /// Where the unsupported first hit landed.
  std::optional<FirstHit> unsupported_hit;
  std::vector<std::string> warnings;

  [[nodiscard]] FreeFlight initial_flight() const { return {z0, v0}; }
};

/// Event-driven trajectory from lab-frame initial data z(t) = (z0 + v0 t) e^{-it}.
///
/// The first hit comes from event detection; all later hits come from the
/// closed-form impact map. Stops after cfg.n_max impacts, before the first
/// impact later than cfg.t_max, or at a degenerate hit (quasi-trajectory
/// appended when cfg.quasi_mode is extend). An unsupported first hit is
/// reported through the termination reason, not thrown.
TrajectoryRecord simulate(Complex z0, Complex v0, const SimConfig& cfg);

/// Rotating-frame state at time t reconstructed from the record.
/// Right-continuous at impacts. Throws RangeError past a degenerate stop or
/// before t = 0.
PhaseState state_at(const TrajectoryRecord& rec, double t);

/// Time up to which state_at is meaningful: the next (not yet computed)
/// impact for an open segment, or t_max.
double covered_until(const TrajectoryRecord& rec, const SimConfig& cfg);

struct ConvergenceRow {
  double epsilon = 0.0;
  Termination termination = Termination::reached_n_max;
  long impacts = 0;
  /// Largest grid time at which the perturbed trajectory was compared.
  double compared_until = 0.0;
  double sup_position = 0.0;
  double sup_velocity = 0.0;
};

struct ConvergenceTable {
  double r = 0.0;
  double t1 = 0.0;
  double horizon = 0.0;
  int grid_points = 0;
  std::string perturbation;
  std::vector<ConvergenceRow> rows;
};

/// Perturb the degenerate start r (1 - i t1) e^{i t1} by scaling its lab
/// velocity by (1 + eps), simulate up to T, and report sup distances to the
/// quasi-trajectory on a 1000-point grid over [0, T]. Report only.
ConvergenceTable convergence_experiment(double r, double t1, const std::vector<double>& epsilons,
                                        double horizon, const SimConfig& cfg);

/// Lab-frame velocity of the degenerate start with parameters (r, tau).
Complex degenerate_lab_velocity(double r, double tau);
Complex degenerate_start(double r, double tau);

}  // namespace rodbilliard
