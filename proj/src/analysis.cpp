#include "rodbilliard/analysis.hpp"

#include <cmath>

namespace rodbilliard {

std::vector<AsymptoticRow> asymptotic_table(const TrajectoryRecord& rec,
                                            const std::vector<long>& ns) {
  std::vector<AsymptoticRow> rows;
  rows.reserve(ns.size());
  for (long n : ns) {
    if (n < 2) throw RangeError("asymptotic_table: n must be >= 2");
    const auto idx = static_cast<std::size_t>(n - 1);
    if (rec.impacts.size() < idx + 2 || !rec.segments[idx].delta)
      throw RangeError("asymptotic_table: record has " + std::to_string(rec.impacts.size()) +
                       " impacts, need " + std::to_string(n + 1));
    const FlightSegment& seg = rec.segments[idx];
    const double dn = static_cast<double>(n);
    AsymptoticRow row;
    row.n = n;
    row.delta_n = *seg.delta;
    row.n_delta_n = dn * row.delta_n;
    row.b_minus_1_scaled = dn * (seg.b - 1.0);
    row.ratio_scaled = dn * (rec.impacts[idx + 1].r / rec.impacts[idx].r - 1.0);
    row.t_over_logn = rec.impacts[idx].t / std::log(dn);
    row.height_n = seg.height_max.value_or(0.0);
    row.a_n = seg.a;
    rows.push_back(row);
  }
  return rows;
}

GrowthEstimate estimate_growth_constant(const TrajectoryRecord& rec) {
  const std::size_t count = rec.impacts.size();
  if (count < 1000) throw RangeError("estimate_growth_constant: need at least 1000 impacts");
  const std::size_t begin = count / 2;
  const std::size_t mid = begin + (count - begin) / 2;

  auto scaled = [&](std::size_t k) { return rec.impacts[k].r * std::exp(-rec.impacts[k].t); };
  auto mean = [&](std::size_t lo, std::size_t hi) {
    CompensatedSum acc;
    for (std::size_t k = lo; k < hi; ++k) acc.add(scaled(k));
    return acc.value() / static_cast<double>(hi - lo);
  };

  GrowthEstimate est;
  est.tail_begin = static_cast<long>(begin) + 1;
  est.c = mean(begin, count);
  est.c_first_half = mean(begin, mid);
  est.c_second_half = mean(mid, count);
  est.half_margin = std::abs(est.c_second_half - est.c_first_half) / est.c;
  est.residuals.reserve(count - begin);
  for (std::size_t k = begin; k < count; ++k) est.residuals.push_back(scaled(k) / est.c - 1.0);
  return est;
}

OrbitCheck check_monotonicity(const TrajectoryRecord& rec) {
  for (std::size_t k = 1; k < rec.impacts.size(); ++k)
    if (!(rec.impacts[k].r > rec.impacts[k - 1].r))
      return {false, static_cast<long>(k + 1), "r_n not strictly increasing"};
  for (std::size_t k = 1; k < rec.segments.size(); ++k) {
    if (!rec.segments[k].delta) break;
    if (!(*rec.segments[k].delta < *rec.segments[k - 1].delta))
      return {false, static_cast<long>(k + 1), "delta_n not strictly decreasing"};
  }
  return {};
}

OrbitCheck check_box_invariants(const TrajectoryRecord& rec) {
  for (std::size_t k = 1; k < rec.segments.size(); ++k) {
    const FlightSegment& seg = rec.segments[k];
    const auto n = static_cast<long>(k + 1);
    if (!(seg.b > 1.0 && seg.b < 2.0)) return {false, n, "b_n outside (1, 2)"};
    if (!(seg.a > 0.0)) return {false, n, "a_n not positive"};
    const Complex in = rec.impacts[k].zdot_in;
    if (!(in.real() > 0.0 && in.imag() < 0.0)) return {false, n, "incoming velocity sign"};
    if (!seg.delta) continue;
    const double ad = seg.a * *seg.delta;
    if (!(ad < 1.0)) return {false, n, "a_n delta_n >= 1"};
    if (!((1.0 + ad) / seg.b < 1.0)) return {false, n, "(1 + a_n delta_n) / b_n >= 1"};
  }
  return {};
}

double max_scaled_height(const TrajectoryRecord& rec, long lo, long hi, double power) {
  double best = 0.0;
  for (long n = std::max(lo, 1L); n <= hi && n <= static_cast<long>(rec.segments.size()); ++n) {
    const FlightSegment& seg = rec.segments[static_cast<std::size_t>(n - 1)];
    if (!seg.height_max) continue;
    best = std::max(best, *seg.height_max * std::pow(static_cast<double>(n), power));
  }
  return best;
}

}  // namespace rodbilliard
