#include <gtest/gtest.h>

#include "reference.hpp"
#include "rodbilliard/core.hpp"
#include "rodbilliard/flight.hpp"
#include "rodbilliard/small_angle.hpp"

using namespace rodbilliard;

TEST(Core, ComplexMultiplyAndRotation) {
  EXPECT_EQ(complex_multiply({1, 2}, {3, -1}), Complex(5, 5));
  const Complex q = unit_rotation(kPi / 2);
  EXPECT_NEAR(q.real(), 0.0, 1e-16);
  EXPECT_DOUBLE_EQ(q.imag(), 1.0);
  EXPECT_DOUBLE_EQ(std::abs(unit_rotation(12.345)), 1.0);
}

TEST(Core, CompensatedSumKeepsSmallTerms) {
  CompensatedSum s(1.0);
  for (int i = 0; i < 1000000; ++i) s.add(1e-16);
  EXPECT_NEAR(s.value(), 1.0 + 1e-10, 1e-22);
}

TEST(Core, ConfigValidation) {
  SimConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.scan_step = 0.0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = SimConfig{};
  cfg.n_max = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = SimConfig{};
  cfg.root_abs_tol = -1.0;
  EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(Core, EnumStringsRoundTrip) {
  for (auto k : {ImpactKind::transversal, ImpactKind::grazing, ImpactKind::degenerate})
    EXPECT_EQ(impact_kind_from_string(to_string(k)), k);
  for (auto m : {QuasiMode::stop, QuasiMode::extend}) EXPECT_EQ(quasi_mode_from_string(to_string(m)), m);
  EXPECT_THROW(quasi_mode_from_string("slide"), DomainError);
}

TEST(Core, RequireFiniteRejectsNan) {
  EXPECT_THROW(require_finite(std::nan(""), "x"), NumericError);
  EXPECT_THROW(require_finite(Complex(1.0, kInf), "z"), NumericError);
  EXPECT_EQ(require_finite(2.0, "x"), 2.0);
}

// Reference values computed once at 50 digits and frozen.
TEST(SmallAngle, OneMinusSincMatchesHighPrecision) {
  const std::pair<double, double> table[] = {
      {1e-8, 1.6666666666666667e-17}, {1e-4, 1.6666666658333333e-9},
      {0.01, 1.6666583333531746e-5},  {0.3, 0.014932644462201416},
      {0.99, 0.15552931454492877},    {1.01, 0.16155262909107407},
      {2.0, 0.54535128658715915},     {3.0, 0.95295999731337759},
  };
  for (auto [x, ref] : table) EXPECT_NEAR(one_minus_sinc(x) / ref, 1.0, 1e-14) << x;
  EXPECT_EQ(one_minus_sinc(0.0), 0.0);
}

TEST(SmallAngle, SquaredAndSecantForms) {
  const double table[][3] = {
      {1e-6, 3.3333333333328889e-13, 1.6666666666668611e-13},
      {1e-3, 3.3333328888889206e-7, 1.6666668611111316e-7},
      {0.1, 0.0033288920620815562, 0.0016686131634776649},
      {0.45, 0.065703625359665325, 0.034564729179036856},
  };
  for (const auto& row : table) {
    EXPECT_NEAR(one_minus_sinc_squared(row[0]) / row[1], 1.0, 1e-14) << row[0];
    EXPECT_NEAR(x_over_sin_minus_one(row[0]) / row[2], 1.0, 1e-14) << row[0];
  }
}

TEST(SmallAngle, NormalizedHeightIsImFOverRS) {
  const double a = 0.3, b = 1.7;
  for (double s : {1e-3, 0.2, 0.9, 2.0}) {
    const double direct = ((1 + a * s) * -std::sin(s) + b * s * std::cos(s)) / s;
    EXPECT_NEAR(normalized_height(s, a, b, b - 1.0), direct, 1e-14);
    const double h = 1e-6;
    const double fd = (normalized_height(s + h, a, b, b - 1.0) - normalized_height(s - h, a, b, b - 1.0)) /
                      (2 * h);
    EXPECT_NEAR(normalized_height_derivative(s, a, b), fd, 1e-8);
  }
}

TEST(Flight, PureRotationOfRestingPoint) {
  // A point at rest at i in the lab is seen rotating clockwise.
  const FreeFlight ff{{0, 1}, {0, 0}};
  const Complex z = flight_position(ff, kPi / 2);
  EXPECT_NEAR(z.real(), 1.0, 1e-15);
  EXPECT_NEAR(z.imag(), 0.0, 1e-15);
}

TEST(Flight, VelocityAndAccelerationAreDerivatives) {
  const FreeFlight ff{{0.3, 1.2}, {-0.7, 0.4}};
  const double h = 1e-5;
  for (double t : {0.0, 0.5, 2.0, 5.0}) {
    const Complex dv = (flight_position(ff, t + h) - flight_position(ff, t - h)) / (2 * h);
    const Complex da = (flight_velocity(ff, t + h) - flight_velocity(ff, t - h)) / (2 * h);
    EXPECT_LT(std::abs(dv - flight_velocity(ff, t)), 1e-9);
    EXPECT_LT(std::abs(da - flight_acceleration(ff, t)), 1e-9);
  }
}

TEST(Flight, FromStateReproducesState) {
  const Complex z0(0.4, 2.0), zd0(0.1, -0.3);
  const FreeFlight ff = FreeFlight::from_state(z0, zd0);
  EXPECT_LT(std::abs(flight_position(ff, 0.0) - z0), 1e-15);
  EXPECT_LT(std::abs(flight_velocity(ff, 0.0) - zd0), 1e-15);
}

TEST(Flight, ReflectionAndLabFrame) {
  EXPECT_EQ(reflect({0.6, -2.0}), Complex(0.6, 2.0));
  const FreeFlight ff{{1.0, 0.5}, {0.2, -0.3}};
  for (double t : {0.0, 1.0, 3.0}) {
    const Complex lab = to_lab_frame(flight_position(ff, t), t);
    EXPECT_LT(std::abs(lab - (ff.z + ff.v * t)), 1e-14);
  }
}

TEST(Flight, SegmentMatchesEquivalentFreeFlight) {
  FlightSegment seg;
  seg.n = 3;
  seg.t_start = 2.5;
  seg.r = 4.0;
  seg.a = 0.8;
  seg.b = 1.4;
  seg.delta = 0.6;
  const FreeFlight ff = to_free_flight(seg);
  for (double s : {0.0, 0.1, 0.3, 0.6}) {
    EXPECT_LT(std::abs(segment_position(seg, s) - flight_position(ff, seg.t_start + s)), 1e-13);
    EXPECT_LT(std::abs(segment_velocity(seg, s) - flight_velocity(ff, seg.t_start + s)), 1e-13);
  }
  EXPECT_THROW(segment_position(seg, -0.01), RangeError);
  EXPECT_THROW(segment_position(seg, 0.61), RangeError);
}

TEST(Flight, SegmentHeightKeepsRelativePrecisionOnTinyArcs) {
  // b = 1 + 1.5e-6, a = 1: Im f(s) = r s G(s), compared with a long double
  // evaluation of r s ((b-1) - 2 b sin^2(s/2) + 1 - sinc s - a sin s).
  FlightSegment seg;
  seg.r = 3.0;
  seg.a = 1.0;
  seg.b = 1.0 + 1.5e-6;
  const double s = 7e-7;
  const long double sl = s, bl = seg.b;
  const long double h = std::sin(sl / 2);
  const long double g = (bl - 1) - 2 * bl * h * h + (1 - std::sin(sl) / sl) - std::sin(sl);
  const double ref = static_cast<double>(3.0L * sl * g);
  EXPECT_NEAR(segment_position(seg, s).imag() / ref, 1.0, 1e-9);
}
