#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rodbilliard/simulator.hpp"

namespace rodbilliard {

/// Scaled diagnostics at impact n. Each column tends to a known limit:
/// n_delta_n -> 3/2, b_minus_1_scaled -> 3/2, ratio_scaled -> 3/2,
/// t_over_logn -> 3/2, a_n -> 1.
struct AsymptoticRow {
  long n = 0;
  double delta_n = 0.0;
  double n_delta_n = 0.0;
  double b_minus_1_scaled = 0.0;
  double ratio_scaled = 0.0;
  double t_over_logn = 0.0;
  double height_n = 0.0;
  double a_n = 0.0;
};

/// Rows for the requested n (each n >= 2 with impacts n and n+1 recorded).
/// Throws RangeError otherwise.
std::vector<AsymptoticRow> asymptotic_table(const TrajectoryRecord& rec,
                                            const std::vector<long>& ns);

struct GrowthEstimate {
  double c = 0.0;
  /// r_n e^{-t_n} / c - 1 over the tail.
  std::vector<double> residuals;
  long tail_begin = 0;  // first impact index n in the tail
  double c_first_half = 0.0;
  double c_second_half = 0.0;
  /// |c_second_half - c_first_half| / c.
  double half_margin = 0.0;
};

/// Tail average of r_n e^{-t_n} over the second half of the impacts.
/// Needs at least 1000 impacts (RangeError).
GrowthEstimate estimate_growth_constant(const TrajectoryRecord& rec);

/// First index (1-based impact number) where an orbit-wide property fails.
struct OrbitCheck {
  bool ok = true;
  long first_failure = 0;
  std::string what;
};

/// delta_n strictly decreasing over closed segments, r_n strictly increasing
/// over impacts; exact comparisons.
OrbitCheck check_monotonicity(const TrajectoryRecord& rec);

/// For n >= 2: 1 < b_n < 2, a_n > 0, a_n delta_n < 1, (1 + a_n delta_n)/b_n < 1,
/// and incoming Re zdot > 0, Im zdot < 0.
OrbitCheck check_box_invariants(const TrajectoryRecord& rec);

/// max of height_n n^{power} over the closed segments with lo <= n <= hi.
double max_scaled_height(const TrajectoryRecord& rec, long lo, long hi, double power);

}  // namespace rodbilliard
