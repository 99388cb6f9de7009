#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace rodbilliard {

/// Point or velocity in the plane, identified with the complex plane.
using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Errors. Everything thrown by the library derives from Error.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition of an operation violated by its arguments.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the interval on which a quantity is defined.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Iteration failed to converge or produced a non-finite value.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A state the theory rules out was reached: numerical failure or a bug.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// The first hit lands on the non-positive semiaxis (or the pivot).
class UnsupportedFirstImpact : public Error {
 public:
  UnsupportedFirstImpact(double t1, double r1);
  double t1;
  double r1;
};

/// Incoming velocity vanishes at the impact: the trajectory cannot be continued.
class DegenerateImpact : public Error {
 public:
  explicit DegenerateImpact(double r);
  double r;
};

// ---------------------------------------------------------------------------

struct PhaseState {
  double t = 0.0;
  Complex z;     // rotating-frame position
  Complex zdot;  // rotating-frame velocity
};

enum class QuasiMode { stop, extend };

enum class ImpactKind { transversal, grazing, degenerate };

struct SimConfig {
  double root_abs_tol = 1e-13;
  int max_bisect_iters = 200;
  double series_switch_delta = 1e-4;
  double scan_step = 1e-3;
  long n_max = 1000;
  double t_max = kInf;
  double grazing_tol = 1e-10;
  /// First-impact search covers (0, search_window].
  double search_window = 2.0 * kPi + 0.1;
  QuasiMode quasi_mode = QuasiMode::stop;

  /// Throws DomainError unless every tolerance is positive and n_max >= 1.
  void validate() const;
};

inline Complex complex_multiply(Complex u, Complex v) { return u * v; }

/// e^{i theta}.
inline Complex unit_rotation(double theta) { return {std::cos(theta), std::sin(theta)}; }

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Throws NumericError naming `what` if the value is NaN or infinite.
double require_finite(double x, const char* what);
Complex require_finite(Complex z, const char* what);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  explicit CompensatedSum(double start = 0.0) : sum_(start) {}

  double add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
    return value();
  }

  [[nodiscard]] double value() const { return sum_ + carry_; }

 private:
  double sum_;
  double carry_ = 0.0;
};

std::string to_string(QuasiMode mode);
QuasiMode quasi_mode_from_string(const std::string& s);
std::string to_string(ImpactKind kind);
ImpactKind impact_kind_from_string(const std::string& s);

}  // namespace rodbilliard
