#include "rodbilliard/export.hpp"

#include <charconv>
#include <ostream>

#include <json.hpp>

namespace rodbilliard {

using Json = nlohmann::ordered_json;

void ExportOptions::validate() const {
  if (samples_per_segment < 2) throw DomainError("samples_per_segment must be >= 2");
  if (!(quasi_window > 0.0)) throw DomainError("quasi_window must be positive");
}

std::string to_string(ExportFormat f) { return f == ExportFormat::csv ? "csv" : "json"; }

std::string to_string(Frame f) {
  switch (f) {
    case Frame::rotating:
      return "rotating";
    case Frame::lab:
      return "lab";
    case Frame::both:
      return "both";
  }
  return "both";
}

ExportFormat export_format_from_string(const std::string& s) {
  if (s == "csv") return ExportFormat::csv;
  if (s == "json") return ExportFormat::json;
  throw DomainError("format must be csv or json, got '" + s + "'");
}

Frame frame_from_string(const std::string& s) {
  if (s == "rotating") return Frame::rotating;
  if (s == "lab") return Frame::lab;
  if (s == "both") return Frame::both;
  throw DomainError("frame must be rotating, lab or both, got '" + s + "'");
}

std::string format_double(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return {buf, res.ptr};
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<TrajectorySample> sample_trajectory(const TrajectoryRecord& rec, const SimConfig& cfg,
                                                const ExportOptions& opts) {
  opts.validate();
  const int k_max = opts.samples_per_segment - 1;
  std::vector<TrajectorySample> out;

  auto sample_flight = [&](double t_end) {
    const FreeFlight ff = rec.initial_flight();
    for (int k = 0; k <= k_max; ++k) {
      const double t = t_end * k / k_max;
      out.push_back({t, flight_position(ff, t), 0});
    }
  };
  auto sample_arc = [&](const FlightSegment& seg, double length) {
    for (int k = 0; k <= k_max; ++k) {
      const double s = length * k / k_max;
      out.push_back({seg.t_start + s, segment_position(seg, s), seg.n});
    }
  };

  if (rec.impacts.empty()) {
    if (rec.unsupported_hit)
      sample_flight(rec.unsupported_hit->t);
    else if (std::isfinite(cfg.t_max))
      sample_flight(cfg.t_max);
    return out;
  }

  sample_flight(rec.impacts.front().t);
  for (const FlightSegment& seg : rec.segments) {
    if (seg.delta) {
      sample_arc(seg, *seg.delta);
    } else {
      const double end = std::min(covered_until(rec, cfg), cfg.t_max);
      sample_arc(seg, std::max(end - seg.t_start, 0.0));
    }
  }
  if (rec.quasi_start) {
    const QuasiTrajectory& q = *rec.quasi_start;
    const double end = std::isfinite(cfg.t_max) ? cfg.t_max : q.t1 + opts.quasi_window;
    for (int k = 0; k <= k_max; ++k) {
      const double t = q.t1 + (end - q.t1) * k / k_max;
      out.push_back({t, quasi_position(q, t), 1});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

void write_samples_csv(std::ostream& os, const std::vector<TrajectorySample>& samples,
                       Frame frame) {
  os << "t,re_rot,im_rot,re_lab,im_lab,segment\n";
  const bool rot = frame != Frame::lab;
  const bool lab = frame != Frame::rotating;
  for (const auto& s : samples) {
    os << format_double(s.t) << ',';
    if (rot) os << format_double(s.rot.real()) << ',' << format_double(s.rot.imag());
    else os << ',';
    os << ',';
    if (lab) {
      const Complex l = to_lab_frame(s.rot, s.t);
      os << format_double(l.real()) << ',' << format_double(l.imag());
    } else {
      os << ',';
    }
    os << ',' << s.segment << '\n';
  }
}

void write_impacts_csv(std::ostream& os, const TrajectoryRecord& rec) {
  os << "n,t_n,delta_n,r_n,a_n,b_n,re_in,im_in,kind\n";
  for (std::size_t k = 0; k < rec.impacts.size(); ++k) {
    const ImpactEvent& ev = rec.impacts[k];
    os << ev.n << ',' << format_double(ev.t) << ',';
    const FlightSegment* seg = k < rec.segments.size() ? &rec.segments[k] : nullptr;
    if (seg && seg->delta) os << format_double(*seg->delta);
    os << ',' << format_double(ev.r) << ',';
    if (seg) os << format_double(seg->a) << ',' << format_double(seg->b);
    else os << ',';
    os << ',' << format_double(ev.zdot_in.real()) << ',' << format_double(ev.zdot_in.imag()) << ','
       << to_string(ev.kind) << '\n';
  }
}

void write_asymptotic_csv(std::ostream& os, const std::vector<AsymptoticRow>& rows) {
  os << "n,delta_n,n_delta_n,b_minus_1_scaled,ratio_scaled,t_over_logn,height_n,a_n\n";
  for (const auto& r : rows)
    os << r.n << ',' << format_double(r.delta_n) << ',' << format_double(r.n_delta_n) << ','
       << format_double(r.b_minus_1_scaled) << ',' << format_double(r.ratio_scaled) << ','
       << format_double(r.t_over_logn) << ',' << format_double(r.height_n) << ','
       << format_double(r.a_n) << '\n';
}

void write_oracle_csv(std::ostream& os, const std::vector<OracleComparisonRow>& rows) {
  os << "n,t_map,t_oracle,abs_diff,r_map,r_oracle\n";
  for (const auto& r : rows)
    os << r.n << ',' << format_double(r.t_map) << ',' << format_double(r.t_oracle) << ','
       << format_double(std::abs(r.t_map - r.t_oracle)) << ',' << format_double(r.r_map) << ','
       << format_double(r.r_oracle) << '\n';
}

void write_convergence_csv(std::ostream& os, const ConvergenceTable& table) {
  os << "epsilon,termination,impacts,compared_until,sup_position,sup_velocity\n";
  for (const auto& r : table.rows)
    os << format_double(r.epsilon) << ',' << to_string(r.termination) << ',' << r.impacts << ','
       << format_double(r.compared_until) << ',' << format_double(r.sup_position) << ','
       << format_double(r.sup_velocity) << '\n';
}

// ---------------------------------------------------------------------------
// JSON

namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

Json optional_json(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

std::optional<double> optional_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

Json config_json(const SimConfig& cfg) {
  Json j;
  j["root_abs_tol"] = cfg.root_abs_tol;
  j["max_bisect_iters"] = cfg.max_bisect_iters;
  j["series_switch_delta"] = cfg.series_switch_delta;
  j["scan_step"] = cfg.scan_step;
  j["n_max"] = cfg.n_max;
  j["t_max"] = std::isfinite(cfg.t_max) ? Json(cfg.t_max) : Json(nullptr);
  j["grazing_tol"] = cfg.grazing_tol;
  j["search_window"] = cfg.search_window;
  j["quasi_mode"] = to_string(cfg.quasi_mode);
  return j;
}

SimConfig config_from(const Json& j) {
  SimConfig cfg;
  cfg.root_abs_tol = j.at("root_abs_tol").get<double>();
  cfg.max_bisect_iters = j.at("max_bisect_iters").get<int>();
  cfg.series_switch_delta = j.at("series_switch_delta").get<double>();
  cfg.scan_step = j.at("scan_step").get<double>();
  cfg.n_max = j.at("n_max").get<long>();
  cfg.t_max = j.at("t_max").is_null() ? kInf : j.at("t_max").get<double>();
  cfg.grazing_tol = j.at("grazing_tol").get<double>();
  cfg.search_window = j.at("search_window").get<double>();
  cfg.quasi_mode = quasi_mode_from_string(j.at("quasi_mode").get<std::string>());
  return cfg;
}

}  // namespace

std::string record_to_json(const TrajectoryRecord& rec, const SimConfig& cfg,
                           const ExportOptions& opts) {
  Json doc;
  doc["format"] = "rodbilliard-trajectory";
  doc["version"] = 1;
  doc["config"] = config_json(cfg);
  doc["export"] = {{"frame", to_string(opts.frame)},
                   {"samples_per_segment", opts.samples_per_segment},
                   {"quasi_window", opts.quasi_window}};
  doc["initial"] = {{"z0", complex_json(rec.z0)}, {"v0", complex_json(rec.v0)}};
  doc["termination"] = to_string(rec.termination);
  doc["unsupported_hit"] = rec.unsupported_hit
                               ? Json{{"t", rec.unsupported_hit->t}, {"r", rec.unsupported_hit->r}}
                               : Json(nullptr);
  doc["quasi_start"] = rec.quasi_start
                           ? Json{{"r", rec.quasi_start->r}, {"t1", rec.quasi_start->t1}}
                           : Json(nullptr);

  Json impacts = Json::array();
  for (const auto& ev : rec.impacts)
    impacts.push_back({{"n", ev.n},
                       {"t", ev.t},
                       {"r", ev.r},
                       {"zdot_in", complex_json(ev.zdot_in)},
                       {"zdot_out", complex_json(ev.zdot_out)},
                       {"kind", to_string(ev.kind)}});
  doc["impacts"] = std::move(impacts);

  Json segments = Json::array();
  for (const auto& s : rec.segments)
    segments.push_back({{"n", s.n},
                        {"t_start", s.t_start},
                        {"r", s.r},
                        {"a", s.a},
                        {"b", s.b},
                        {"delta", optional_json(s.delta)},
                        {"height_max", optional_json(s.height_max)}});
  doc["segments"] = std::move(segments);
  doc["warnings"] = rec.warnings;

  const bool rot = opts.frame != Frame::lab;
  const bool lab = opts.frame != Frame::rotating;
  Json samples = Json::array();
  for (const auto& s : sample_trajectory(rec, cfg, opts)) {
    Json row;
    row["t"] = s.t;
    if (rot) row["rot"] = complex_json(s.rot);
    if (lab) row["lab"] = complex_json(to_lab_frame(s.rot, s.t));
    row["segment"] = s.segment;
    samples.push_back(std::move(row));
  }
  doc["samples"] = std::move(samples);
  return doc.dump(2) + "\n";
}

ParsedRecord record_from_json(const std::string& text) {
  const Json doc = Json::parse(text);
  if (doc.value("format", "") != "rodbilliard-trajectory")
    throw DomainError("not a rodbilliard trajectory document");

  ParsedRecord out;
  out.config = config_from(doc.at("config"));
  const Json& ex = doc.at("export");
  out.options.format = ExportFormat::json;
  out.options.frame = frame_from_string(ex.at("frame").get<std::string>());
  out.options.samples_per_segment = ex.at("samples_per_segment").get<int>();
  out.options.quasi_window = ex.at("quasi_window").get<double>();

  TrajectoryRecord& rec = out.record;
  rec.z0 = complex_from(doc.at("initial").at("z0"));
  rec.v0 = complex_from(doc.at("initial").at("v0"));
  rec.termination = termination_from_string(doc.at("termination").get<std::string>());
  if (const Json& u = doc.at("unsupported_hit"); !u.is_null())
    rec.unsupported_hit = FirstHit{u.at("t").get<double>(), u.at("r").get<double>()};
  if (const Json& q = doc.at("quasi_start"); !q.is_null())
    rec.quasi_start = QuasiTrajectory{q.at("r").get<double>(), q.at("t1").get<double>()};
  for (const Json& j : doc.at("impacts"))
    rec.impacts.push_back({j.at("n").get<long>(), j.at("t").get<double>(), j.at("r").get<double>(),
                           complex_from(j.at("zdot_in")), complex_from(j.at("zdot_out")),
                           impact_kind_from_string(j.at("kind").get<std::string>())});
  for (const Json& j : doc.at("segments")) {
    FlightSegment s;
    s.n = j.at("n").get<long>();
    s.t_start = j.at("t_start").get<double>();
    s.r = j.at("r").get<double>();
    s.a = j.at("a").get<double>();
    s.b = j.at("b").get<double>();
    s.delta = optional_from(j.at("delta"));
    s.height_max = optional_from(j.at("height_max"));
    rec.segments.push_back(s);
  }
  rec.warnings = doc.at("warnings").get<std::vector<std::string>>();
  return out;
}

}  // namespace rodbilliard
