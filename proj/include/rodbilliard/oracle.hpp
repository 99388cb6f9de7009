#pragma once

#include <cstdint>
#include <vector>

#include "rodbilliard/core.hpp"

namespace rodbilliard {

struct OracleImpact {
  double t = 0.0;
  double r = 0.0;
};

/// The oracle lost track of the impact sequence (missed or spurious hit).
class OracleError : public Error {
 public:
  using Error::Error;
};

/// Brute-force impact sequence for lab-frame start (z0, v0).
///
/// Only the free-flight formula and the reflection law are used: Im z(t) is
/// scanned with step cfg.scan_step, starting 10 scan steps after each
/// reflection, every sign change is bisected to cfg.root_abs_tol and the
/// flight is re-anchored with the reflected velocity. Slow by construction;
/// intended for n_impacts up to about 10^3.
std::vector<OracleImpact> oracle_simulate(Complex z0, Complex v0, long n_impacts,
                                          const SimConfig& cfg);

struct OracleComparisonRow {
  long n = 0;
  double t_map = 0.0;
  double t_oracle = 0.0;
  double r_map = 0.0;
  double r_oracle = 0.0;

  /// |t_map - t_oracle| and |r_map - r_oracle| both below 1e-9 (1 + t_oracle).
  [[nodiscard]] bool within_tolerance(double tol = 1e-9) const;
};

/// Runs simulate() and oracle_simulate() on the same start and pairs the
/// first n impacts. Throws OracleError if either side produces fewer.
std::vector<OracleComparisonRow> compare_with_map(Complex z0, Complex v0, long n,
                                                  const SimConfig& cfg);

struct InitialCondition {
  Complex z0;
  Complex v0;
};

/// Random starts with Re z0 in [-2, 2], Im z0 in [0.1, 5], |v0| <= 5 (uniform
/// in the disc), kept only when the first impact is transversal on the
/// positive semiaxis. Deterministic in seed.
std::vector<InitialCondition> random_supported_starts(std::size_t count, std::uint64_t seed,
                                                      const SimConfig& cfg);

}  // namespace rodbilliard
