#include "rodbilliard/core.hpp"

#include <sstream>

namespace rodbilliard {

namespace {

std::string describe_hit(double t1, double r1) {
  std::ostringstream os;
  os.precision(17);
  os << "first impact at t=" << t1 << " lands at r=" << r1
     << " (only hits on the positive semiaxis are supported)";
  return os.str();
}

std::string describe_degenerate(double r) {
  std::ostringstream os;
  os.precision(17);
  os << "degenerate impact at r=" << r << ": incoming velocity vanishes";
  return os.str();
}

}  // namespace

UnsupportedFirstImpact::UnsupportedFirstImpact(double t1_, double r1_)
    : Error(describe_hit(t1_, r1_)), t1(t1_), r1(r1_) {}

DegenerateImpact::DegenerateImpact(double r_) : Error(describe_degenerate(r_)), r(r_) {}

void SimConfig::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0)) throw DomainError(std::string("SimConfig: ") + name + " must be > 0");
  };
  positive(root_abs_tol, "root_abs_tol");
  positive(series_switch_delta, "series_switch_delta");
  positive(scan_step, "scan_step");
  positive(grazing_tol, "grazing_tol");
  positive(t_max, "t_max");
  positive(search_window, "search_window");
  if (max_bisect_iters < 1) throw DomainError("SimConfig: max_bisect_iters must be >= 1");
  if (n_max < 1) throw DomainError("SimConfig: n_max must be >= 1");
}

double require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw NumericError(std::string("non-finite value: ") + what);
  return x;
}

Complex require_finite(Complex z, const char* what) {
  if (!is_finite(z)) throw NumericError(std::string("non-finite value: ") + what);
  return z;
}

std::string to_string(QuasiMode mode) { return mode == QuasiMode::stop ? "stop" : "extend"; }

QuasiMode quasi_mode_from_string(const std::string& s) {
  if (s == "stop") return QuasiMode::stop;
  if (s == "extend") return QuasiMode::extend;
  throw DomainError("quasi mode must be 'stop' or 'extend', got '" + s + "'");
}

std::string to_string(ImpactKind kind) {
  switch (kind) {
    case ImpactKind::transversal:
      return "transversal";
    case ImpactKind::grazing:
      return "grazing";
    case ImpactKind::degenerate:
      return "degenerate";
  }
  return "unknown";
}

ImpactKind impact_kind_from_string(const std::string& s) {
  if (s == "transversal") return ImpactKind::transversal;
  if (s == "grazing") return ImpactKind::grazing;
  if (s == "degenerate") return ImpactKind::degenerate;
  throw DomainError("unknown impact kind '" + s + "'");
}

}  // namespace rodbilliard
