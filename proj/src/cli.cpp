#include "rodbilliard/cli.hpp"

#include <atomic>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <thread>

#include <CLI11.hpp>

#include "rodbilliard/analysis.hpp"
#include "rodbilliard/export.hpp"
#include "rodbilliard/oracle.hpp"
#include "rodbilliard/simulator.hpp"

namespace rodbilliard {

namespace {

double parse_real(std::string_view s, const std::string& whole) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw DomainError("expected RE,IM, got '" + whole + "'");
  return x;
}

struct Band {
  double lo = 0.0;
  double hi = 0.0;
};

Band parse_band(const std::string& text) {
  const Complex c = parse_complex(text);
  if (!(c.real() <= c.imag())) throw DomainError("band LO,HI needs LO <= HI: '" + text + "'");
  return {c.real(), c.imag()};
}

std::string fixed3(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

// Output sink: --out PATH or the supplied stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw DomainError("cannot open '" + path + "' for writing");
      os_ = file_.get();
    }
  }
  std::ostream& stream() { return *os_; }
  [[nodiscard]] bool to_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

int termination_code(Termination t) {
  if (t == Termination::unsupported_first_impact) return exit_unsupported;
  if (t == Termination::degenerate_stop) return exit_degenerate;
  return exit_ok;
}

void report_termination(const TrajectoryRecord& rec, std::ostream& err) {
  for (const auto& w : rec.warnings) err << "warning: " << w << '\n';
  if (rec.termination == Termination::unsupported_first_impact && rec.unsupported_hit)
    err << "first impact at t=" << format_double(rec.unsupported_hit->t)
        << " lands on the non-positive semiaxis (r=" << format_double(rec.unsupported_hit->r)
        << "); not supported\n";
  if (rec.termination == Termination::degenerate_stop)
    err << "degenerate impact (incoming velocity zero) at t=" << format_double(rec.impacts.back().t)
        << "; stopped\n";
}

template <class Work>
void parallel_for(std::size_t count, unsigned jobs, Work work) {
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < count; i = next++) work(i);
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(loop);
  loop();
  for (auto& th : pool) th.join();
}

struct Shared {
  std::string z0;
  std::string v0;
  std::string quasi = "stop";
  std::string out;
  SimConfig cfg;
};

struct StartPoint {
  Complex z0;
  Complex v0;
};

StartPoint require_start(const Shared& sh) {
  if (sh.z0.empty() || sh.v0.empty()) throw DomainError("--z0 and --v0 are required");
  return {parse_complex(sh.z0), parse_complex(sh.v0)};
}

SimConfig finish_config(Shared& sh) {
  sh.cfg.quasi_mode = quasi_mode_from_string(sh.quasi);
  sh.cfg.validate();
  return sh.cfg;
}

}  // namespace

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
    throw DomainError("expected RE,IM, got '" + text + "'");
  const std::string_view all(text);
  return {parse_real(all.substr(0, comma), text), parse_real(all.substr(comma + 1), text)};
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Billiard trajectories of a point mass bouncing on a uniformly rotating rod."};
  app.name("rodbill");
  app.require_subcommand(1);
  app.fallthrough();

  Shared sh;
  app.set_config("--config", "", "key=value file mirroring the long flags; flags override it");
  // Config files split unquoted "0,1" into two items; join them back.
  app.add_option("--z0", sh.z0, "initial position RE,IM (lab frame)")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  app.add_option("--v0", sh.v0, "initial velocity RE,IM (lab frame)")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  app.add_option("--n-max", sh.cfg.n_max, "impact budget")->capture_default_str();
  app.add_option("--t-max", sh.cfg.t_max, "time budget")->capture_default_str();
  app.add_option("--quasi", sh.quasi, "after a degenerate hit: stop|extend")->capture_default_str();
  app.add_option("--root-abs-tol", sh.cfg.root_abs_tol)->capture_default_str();
  app.add_option("--max-bisect-iters", sh.cfg.max_bisect_iters)->capture_default_str();
  app.add_option("--series-switch-delta", sh.cfg.series_switch_delta)->capture_default_str();
  app.add_option("--scan-step", sh.cfg.scan_step)->capture_default_str();
  app.add_option("--grazing-tol", sh.cfg.grazing_tol)->capture_default_str();
  app.add_option("--search-window", sh.cfg.search_window)->capture_default_str();
  app.add_option("--out", sh.out, "write data here instead of standard output");

  // simulate
  auto* sim = app.add_subcommand("simulate", "sampled trajectory (CSV or JSON)");
  std::string frame = "both";
  std::string format = "csv";
  ExportOptions eopts;
  sim->add_option("--frame", frame, "rotating|lab|both")->capture_default_str();
  sim->add_option("--format", format, "csv|json")->capture_default_str();
  sim->add_option("--samples", eopts.samples_per_segment, "points per arc")->capture_default_str();
  sim->add_option("--quasi-window", eopts.quasi_window,
                  "sampled length of the sliding motion when --t-max is unbounded")
      ->capture_default_str();

  // impacts
  auto* imp = app.add_subcommand("impacts", "one CSV row per impact");

  // asympt
  auto* asy = app.add_subcommand("asympt", "scaled diagnostics at checkpoints");
  std::vector<long> at;
  std::string band_delta = "1.48,1.52";
  std::string band_ratio = "1.48,1.52";
  std::string band_beta = "0.99,1.01";
  std::string band_time = "1.45,1.55";
  asy->add_option("--at", at, "checkpoints n1,n2,...")->delimiter(',')->required();
  asy->add_option("--band-delta", band_delta, "PASS band for n*delta_n")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join)
      ->capture_default_str();
  asy->add_option("--band-ratio", band_ratio, "PASS band for n*(r_{n+1}/r_n-1)")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join)
      ->capture_default_str();
  asy->add_option("--band-beta", band_beta, "PASS band for (b_n-1)/delta_n")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join)
      ->capture_default_str();
  asy->add_option("--band-time", band_time, "PASS band for t_n/ln n")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join)
      ->capture_default_str();

  // oracle
  auto* ora = app.add_subcommand("oracle", "compare the impact map with brute-force detection");
  long n_impacts = 10;
  std::size_t random_count = 0;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  double tol = 1e-9;
  ora->add_option("--n-impacts", n_impacts, "impacts to compare (at most 1000)")
      ->capture_default_str();
  ora->add_option("--random", random_count, "compare K random supported starts instead")
      ->capture_default_str();
  ora->add_option("--seed", seed, "seed of the random suite")->capture_default_str();
  ora->add_option("--jobs", jobs, "worker threads for --random")->capture_default_str();
  ora->add_option("--tol", tol, "allowed difference is tol*(1+t_n)")->capture_default_str();

  // converge
  auto* conv = app.add_subcommand("converge", "perturbed degenerate starts versus the cosh motion");
  double conv_r = 1.0;
  double conv_tau = 1.0;
  double horizon = 0.0;
  std::vector<double> epsilons{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  conv->add_option("--r", conv_r, "radius of the degenerate hit")->capture_default_str();
  conv->add_option("--tau", conv_tau, "time of the degenerate hit, in (0, t*)")
      ->capture_default_str();
  conv->add_option("--eps", epsilons, "velocity scalings eps1,eps2,...")->delimiter(',');
  conv->add_option("--horizon", horizon, "end time (default tau + 2)");

  // growth
  auto* gro = app.add_subcommand("growth", "tail estimate of r_n e^{-t_n}");
  std::string residuals_path;
  gro->add_option("--residuals", residuals_path, "also write n,residual CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_usage;
  }

  try {
    if (sim->parsed()) {
      const StartPoint sp = require_start(sh);
      const SimConfig cfg = finish_config(sh);
      eopts.frame = frame_from_string(frame);
      eopts.format = export_format_from_string(format);
      eopts.output_path = sh.out;
      eopts.validate();
      const TrajectoryRecord rec = simulate(sp.z0, sp.v0, cfg);
      Sink sink(sh.out, out);
      if (eopts.format == ExportFormat::json)
        sink.stream() << record_to_json(rec, cfg, eopts);
      else
        write_samples_csv(sink.stream(), sample_trajectory(rec, cfg, eopts), eopts.frame);
      report_termination(rec, err);
      return termination_code(rec.termination);
    }

    if (imp->parsed()) {
      const StartPoint sp = require_start(sh);
      const SimConfig cfg = finish_config(sh);
      const TrajectoryRecord rec = simulate(sp.z0, sp.v0, cfg);
      Sink sink(sh.out, out);
      write_impacts_csv(sink.stream(), rec);
      report_termination(rec, err);
      return termination_code(rec.termination);
    }

    if (asy->parsed()) {
      const StartPoint sp = require_start(sh);
      if (app.count("--n-max") == 0 && !at.empty())
        sh.cfg.n_max = *std::max_element(at.begin(), at.end()) + 1;
      const SimConfig cfg = finish_config(sh);
      const Band bd = parse_band(band_delta);
      const Band br = parse_band(band_ratio);
      const Band bb = parse_band(band_beta);
      const Band bt = parse_band(band_time);
      const TrajectoryRecord rec = simulate(sp.z0, sp.v0, cfg);
      if (const int code = termination_code(rec.termination); code != exit_ok) {
        report_termination(rec, err);
        return code;
      }
      const std::vector<AsymptoticRow> rows = asymptotic_table(rec, at);
      Sink sink(sh.out, out);
      write_asymptotic_csv(sink.stream(), rows);
      std::ostream& summary = sink.to_file() ? out : err;
      auto line = [&](const char* name, long n, double v, Band b) {
        summary << name << '@' << n << '=' << fixed3(v) << ' '
                << (v >= b.lo && v <= b.hi ? "PASS" : "FAIL") << '\n';
      };
      for (const auto& r : rows) {
        line("n*delta_n", r.n, r.n_delta_n, bd);
        line("ratio", r.n, r.ratio_scaled, br);
        line("beta/delta", r.n, r.b_minus_1_scaled / r.n_delta_n, bb);
        line("t/ln(n)", r.n, r.t_over_logn, bt);
      }
      return exit_ok;
    }

    if (ora->parsed()) {
      const StartPoint sp = random_count > 0 ? StartPoint{} : require_start(sh);
      const SimConfig cfg = finish_config(sh);
      if (n_impacts < 1 || n_impacts > 1000) throw DomainError("--n-impacts must be in [1, 1000]");
      Sink sink(sh.out, out);
      if (random_count == 0) {
        const auto rows = compare_with_map(sp.z0, sp.v0, n_impacts, cfg);
        write_oracle_csv(sink.stream(), rows);
        for (const auto& r : rows)
          if (!r.within_tolerance(tol)) {
            err << "oracle mismatch at impact " << r.n << ": |dt|=" << format_double(std::abs(r.t_map - r.t_oracle))
                << " |dr|=" << format_double(std::abs(r.r_map - r.r_oracle)) << '\n';
            return exit_oracle_mismatch;
          }
        return exit_ok;
      }

      const auto starts = random_supported_starts(random_count, seed, cfg);
      struct Outcome {
        double dt = 0.0;
        double dr = 0.0;
        bool ok = false;
        std::string error;
      };
      std::vector<Outcome> results(starts.size());
      parallel_for(starts.size(), jobs, [&](std::size_t i) {
        Outcome& o = results[i];
        try {
          const auto rows = compare_with_map(starts[i].z0, starts[i].v0, n_impacts, cfg);
          o.ok = true;
          for (const auto& r : rows) {
            o.dt = std::max(o.dt, std::abs(r.t_map - r.t_oracle));
            o.dr = std::max(o.dr, std::abs(r.r_map - r.r_oracle));
            o.ok = o.ok && r.within_tolerance(tol);
          }
        } catch (const Error& e) {
          o.error = e.what();
        }
      });
      std::ostream& os = sink.stream();
      os << "start,re_z0,im_z0,re_v0,im_v0,max_t_diff,max_r_diff,status\n";
      int code = exit_ok;
      for (std::size_t i = 0; i < starts.size(); ++i) {
        const Outcome& o = results[i];
        os << i << ',' << format_double(starts[i].z0.real()) << ','
           << format_double(starts[i].z0.imag()) << ',' << format_double(starts[i].v0.real()) << ','
           << format_double(starts[i].v0.imag()) << ',' << format_double(o.dt) << ','
           << format_double(o.dr) << ',' << (o.ok ? "ok" : "mismatch") << '\n';
        if (!o.ok) {
          err << "start " << i << ": " << (o.error.empty() ? "difference above tolerance" : o.error)
              << '\n';
          code = exit_oracle_mismatch;
        }
      }
      return code;
    }

    if (conv->parsed()) {
      const SimConfig cfg = finish_config(sh);
      const double T = horizon > 0.0 ? horizon : conv_tau + 2.0;
      const ConvergenceTable table = convergence_experiment(conv_r, conv_tau, epsilons, T, cfg);
      Sink sink(sh.out, out);
      write_convergence_csv(sink.stream(), table);
      return exit_ok;
    }

    if (gro->parsed()) {
      const StartPoint sp = require_start(sh);
      const SimConfig cfg = finish_config(sh);
      const TrajectoryRecord rec = simulate(sp.z0, sp.v0, cfg);
      if (const int code = termination_code(rec.termination); code != exit_ok) {
        report_termination(rec, err);
        return code;
      }
      const GrowthEstimate est = estimate_growth_constant(rec);
      Sink sink(sh.out, out);
      sink.stream() << "impacts,tail_begin,c,c_first_half,c_second_half,half_margin\n"
                    << rec.impacts.size() << ',' << est.tail_begin << ',' << format_double(est.c)
                    << ',' << format_double(est.c_first_half) << ','
                    << format_double(est.c_second_half) << ',' << format_double(est.half_margin)
                    << '\n';
      if (!residuals_path.empty()) {
        Sink res(residuals_path, out);
        res.stream() << "n,residual\n";
        for (std::size_t k = 0; k < est.residuals.size(); ++k)
          res.stream() << est.tail_begin + static_cast<long>(k) << ','
                       << format_double(est.residuals[k]) << '\n';
      }
      return exit_ok;
    }
  } catch (const OracleError& e) {
    err << "error: " << e.what() << '\n';
    return exit_oracle_mismatch;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n' << app.help() ;
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace rodbilliard
