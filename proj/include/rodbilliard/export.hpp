#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rodbilliard/analysis.hpp"
#include "rodbilliard/oracle.hpp"
#include "rodbilliard/simulator.hpp"

namespace rodbilliard {

enum class ExportFormat { csv, json };
enum class Frame { rotating, lab, both };

struct ExportOptions {
  ExportFormat format = ExportFormat::csv;
  Frame frame = Frame::both;
  int samples_per_segment = 64;
  std::string output_path;
  /// Length of the sampled sliding motion when t_max is unbounded.
  double quasi_window = 1.0;

  void validate() const;
};

std::string to_string(ExportFormat f);
std::string to_string(Frame f);
ExportFormat export_format_from_string(const std::string& s);
Frame frame_from_string(const std::string& s);

/// Shortest-to-type-exact decimal: 17 significant digits, locale independent.
std::string format_double(double x);

struct TrajectorySample {
  double t = 0.0;
  Complex rot;
  long segment = 0;  // 0 = before the first impact, n = arc leaving impact n
};

/// samples_per_segment points per arc, endpoints included: the approach arc
/// [0, t_1], every closed arc, the open arc up to its next hit (or t_max), and
/// the sliding motion after a degenerate hit when extended.
std::vector<TrajectorySample> sample_trajectory(const TrajectoryRecord& rec, const SimConfig& cfg,
                                                const ExportOptions& opts);

/// Header `t,re_rot,im_rot,re_lab,im_lab,segment`; columns of a frame not
/// selected by opts.frame are left empty.
void write_samples_csv(std::ostream& os, const std::vector<TrajectorySample>& samples, Frame frame);

/// Header `n,t_n,delta_n,r_n,a_n,b_n,re_in,im_in,kind`, one row per impact.
/// delta_n is empty for the last impact; a_n, b_n are empty after a degenerate hit.
void write_impacts_csv(std::ostream& os, const TrajectoryRecord& rec);

void write_asymptotic_csv(std::ostream& os, const std::vector<AsymptoticRow>& rows);

/// Header `n,t_map,t_oracle,abs_diff,r_map,r_oracle`; abs_diff = |t_map - t_oracle|.
void write_oracle_csv(std::ostream& os, const std::vector<OracleComparisonRow>& rows);

void write_convergence_csv(std::ostream& os, const ConvergenceTable& table);

/// JSON document: config echo, export options, initial data, termination,
/// impacts, segments, warnings and samples. Keys in fixed order, 2-space indent.
std::string record_to_json(const TrajectoryRecord& rec, const SimConfig& cfg,
                           const ExportOptions& opts);

struct ParsedRecord {
  TrajectoryRecord record;
  SimConfig config;
  ExportOptions options;
};

/// Inverse of record_to_json (samples are recomputed, not read).
ParsedRecord record_from_json(const std::string& text);

}  // namespace rodbilliard
