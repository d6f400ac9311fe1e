#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "bootperc/critical.hpp"
#include "bootperc/experiments.hpp"
#include "bootperc/graph.hpp"
#include "bootperc/martingale.hpp"
#include "bootperc/percolation.hpp"
#include "bootperc/report_io.hpp"
#include "bootperc/trial_runner.hpp"

namespace bootperc::cli {

double parse_probability(const std::string& text, double n) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    if (text.rfind("n^", 0) == 0) {
      const std::string exponent = text.substr(2);
      value = std::pow(n, std::stod(exponent, &used));
      if (used != exponent.size()) throw std::invalid_argument("trailing characters");
    } else {
      value = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing characters");
    }
  } catch (const std::logic_error&) {
    throw std::invalid_argument("cannot parse p from '" + text + "'");
  }
  if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument("p = " + text + " is outside [0, 1]");
  return value;
}

namespace {

constexpr const char* kSymbols =
    "Symbols: n = number of vertices, p = edge probability, r = infection threshold,\n"
    "a = |A(0)| initially infected, omega0 = a - a_c (signed), t0 = (r!/(n p^r))^(1/(r-1)),\n"
    "t_c = bottleneck step (smallest minimiser), a_c = critical seed size.";

struct Common {
  std::size_t n = 0;
  std::string p_text;
  unsigned r = 2;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::string output;
  std::string format;  // empty: the subcommand default
  std::optional<std::size_t> a;
  std::optional<double> omega0;
  std::size_t trials = 100;

  double p() const { return parse_probability(p_text, static_cast<double>(n)); }
};

void add_graph_flags(CLI::App& cmd, Common& c) {
  cmd.add_option("--n", c.n, "number of vertices (n)")->required()->check(CLI::PositiveNumber);
  cmd.add_option("--p", c.p_text, "edge probability (p): a number or the form n^-x")->required();
  cmd.add_option("--r", c.r, "infection threshold (r), at least 2")->capture_default_str();
}

void add_run_flags(CLI::App& cmd, Common& c, bool seed_flags) {
  auto* a = cmd.add_option("--a", c.a, "initial seed-set size (a = |A(0)|)");
  auto* w = cmd.add_option("--omega0", c.omega0, "signed deviation from the critical size (omega0), a = a_c + omega0");
  a->excludes(w);
  if (seed_flags) {
    cmd.add_option("--seed", c.seed, "master seed")->capture_default_str();
    cmd.add_option("--workers", c.workers, "worker threads (0 = all cores; BOOTPERC_WORKERS overrides)");
  }
}

void add_output_flags(CLI::App& cmd, Common& c, const std::string& default_format) {
  cmd.add_option("--output", c.output, "output path (stdout if omitted)");
  cmd.add_option("--format", c.format, "csv or json (default " + default_format + ")")
      ->check(CLI::IsMember({"csv", "json"}));
}

std::size_t seed_size(const Common& c, const Regime& regime) {
  if (c.a) {
    if (*c.a > regime.n) throw std::invalid_argument("--a exceeds --n");
    return *c.a;
  }
  if (c.omega0) return regime.seed_size(*c.omega0);
  throw std::invalid_argument("one of --a or --omega0 is required");
}

// Writes the artifact to --output (atomically) or stdout; the summary line
// goes to stdout when a file was written, stderr otherwise.
void emit(const Common& c, const std::string& artifact, const std::string& summary, std::ostream& out,
          std::ostream& err) {
  if (c.output.empty()) {
    out << artifact;
    err << summary << '\n';
  } else {
    write_file_atomic(c.output, artifact);
    out << summary << '\n';
  }
}

void warn_regime(std::size_t n, double p, unsigned r, std::ostream& err) {
  if (p <= 0.0 || p >= 1.0) return;
  for (const auto& w : regime_warnings(static_cast<double>(n), p, r)) err << "warning: " << w << '\n';
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::string_view v(item);
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    double x = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(x))
      throw std::invalid_argument("bad --omega0-grid entry '" + item + "'");
    out.push_back(x);
  }
  if (out.empty()) throw std::invalid_argument("--omega0-grid is empty");
  return out;
}

// CLI11 reads "-57,0,+57" after a space as a flag; glue it to its option.
std::vector<std::string> join_grid_values(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--omega0-grid" && i + 1 < args.size()) {
      out.push_back(args[i] + "=" + args[i + 1]);
      ++i;
    } else {
      out.push_back(args[i]);
    }
  }
  return out;
}

std::string fixed(double x, int digits) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bootstrap percolation on G(n, p): simulation, critical quantities and martingale checks", "bootperc"};
  app.footer(kSymbols);
  app.require_subcommand(1);

  Common c;

  auto* critical = app.add_subcommand("critical", "critical quantities t0, t_c, a_c as JSON");
  critical->footer(kSymbols);
  add_graph_flags(*critical, c);
  std::string f_csv;
  bool relaxation = false;
  critical->add_option("--output", c.output, "also write the JSON to this path");
  critical->add_option("--f-csv", f_csv, "write f(t) = (n pi_hat(t) - t)/(1 - pi_hat(t)) as CSV");
  critical->add_flag("--relaxation", relaxation, "report the real-t minimisation gap on stderr");

  auto* simulate = app.add_subcommand("simulate", "independent trials at one seed size");
  simulate->footer(kSymbols);
  add_graph_flags(*simulate, c);
  add_run_flags(*simulate, c, true);
  simulate->add_option("--trials", c.trials, "number of trials")->check(CLI::PositiveNumber)->capture_default_str();
  add_output_flags(*simulate, c, "json");
  std::string trial_log;
  simulate->add_option("--trial-log", trial_log, "per-trial newline-delimited JSON log");

  auto* sweep = app.add_subcommand("sweep", "phase-transition sweep over a grid of omega0 values");
  sweep->footer(kSymbols);
  add_graph_flags(*sweep, c);
  std::string grid_text;
  sweep->add_option("--omega0-grid", grid_text, "comma-separated signed omega0 values, e.g. -57,0,+57");
  sweep->add_option("--seed", c.seed, "master seed")->capture_default_str();
  sweep->add_option("--workers", c.workers, "worker threads (0 = all cores; BOOTPERC_WORKERS overrides)");
  sweep->add_option("--trials", c.trials, "trials per cell")->check(CLI::PositiveNumber)->capture_default_str();
  add_output_flags(*sweep, c, "csv");
  sweep->add_option("--trial-log", trial_log, "per-trial newline-delimited JSON log");

  auto* martingale = app.add_subcommand("martingale", "empirical mean/variance of the stopped martingale");
  martingale->footer(kSymbols);
  add_graph_flags(*martingale, c);
  add_run_flags(*martingale, c, true);
  std::optional<std::size_t> t_probe;
  std::string trace_csv;
  martingale->add_option("--t-probe", t_probe, "probe step (default t_c)");
  martingale->add_option("--trials", c.trials, "number of independent graphs")->check(CLI::PositiveNumber)
      ->capture_default_str();
  martingale->add_option("--output", c.output, "report JSON path (stdout if omitted)");
  martingale->add_option("--trace-csv", trace_csv, "CSV t,pi_t,M_t,infected_size of the first trial");

  auto* giant = app.add_subcommand("giant", "near-infected set, giant component and completion stages");
  giant->footer(kSymbols);
  add_graph_flags(*giant, c);
  add_run_flags(*giant, c, true);
  giant->add_option("--runs", c.trials, "number of runs with T > t0")->check(CLI::PositiveNumber)->capture_default_str();
  add_output_flags(*giant, c, "json");

  auto* lemma3 = app.add_subcommand("lemma3", "early-phase check: T > t0 and |A(t0)| large");
  lemma3->footer(kSymbols);
  add_graph_flags(*lemma3, c);
  add_run_flags(*lemma3, c, true);
  lemma3->add_option("--trials", c.trials, "number of trials")->check(CLI::PositiveNumber)->capture_default_str();
  lemma3->add_option("--output", c.output, "report JSON path (stdout if omitted)");

  auto* explore = app.add_subcommand("explore", "one exploration run with its step trace as CSV");
  explore->footer(kSymbols);
  add_graph_flags(*explore, c);
  explore->add_option("--a", c.a, "initial seed-set size (a = |A(0)|)")->required();
  explore->add_option("--seed", c.seed, "seed")->capture_default_str();
  std::string rule = "lowest";
  std::string edges_in, edges_out;
  explore->add_option("--rule", rule, "selection rule for u_t")->check(CLI::IsMember({"lowest", "fifo", "random"}))
      ->capture_default_str();
  explore->add_option("--edges-in", edges_in, "read the graph from an edge list instead of sampling");
  explore->add_option("--edges-out", edges_out, "write the sampled graph as an edge list");
  explore->add_option("--output", c.output, "trace CSV path (stdout if omitted)");

  try {
    const std::vector<std::string> args = join_grid_values(argc, argv);
    std::vector<const char*> joined;
    for (const auto& a : args) joined.push_back(a.c_str());
    app.parse(static_cast<int>(joined.size()), joined.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    const double p = c.p();
    const unsigned workers = resolve_workers(c.workers);

    if (*critical) {
      warn_regime(c.n, p, c.r, err);
      const CriticalQuantities q = compute_critical(c.n, p, c.r);
      const std::string json = to_json(q, c.r).dump(2) + "\n";
      out << json;
      if (!c.output.empty()) write_file_atomic(c.output, json);
      if (!f_csv.empty()) write_file_atomic(f_csv, f_table_csv(q));
      if (relaxation) {
        const RealRelaxation rr = real_relaxation(c.n, p, c.r, q);
        err << "real-t minimum at t = " << format_double(rr.t_star) << ", a_c(real) = " << format_double(rr.ac_real)
            << ", gap = " << format_double(rr.gap) << '\n';
      }
      return 0;
    }

    if (*explore) {
      Graph graph;
      if (!edges_in.empty()) {
        std::ifstream in(edges_in);
        if (!in) throw std::invalid_argument("cannot read " + edges_in);
        graph = read_edge_list(in, c.n);
      } else {
        graph = sample_gnp({c.n, p, c.seed});
      }
      if (!edges_out.empty()) {
        std::ostringstream edges;
        write_edge_list(edges, graph);
        write_file_atomic(edges_out, edges.str());
      }
      if (!c.a || *c.a > c.n) throw std::invalid_argument("--a must be at most --n");
      Rng rng(derive_seed(c.seed, StreamTag::SeedSet));
      ProcessParams params{c.r, random_subset(c.n, *c.a, rng)};
      SelectionRule selection;
      selection.seed = c.seed;
      if (rule == "fifo") selection.policy = SelectionPolicy::Fifo;
      if (rule == "random") selection.policy = SelectionPolicy::SeededRandom;
      const ExplorationTrace trace = run_exploration(graph, params, selection);
      std::ostringstream csv;
      write_trace_csv(csv, trace);
      emit(c, csv.str(),
           "edges " + std::to_string(graph.edge_count()) + ", T = " + std::to_string(trace.stopping_time) +
               ", |A_f| = " + std::to_string(trace.final_set.size()),
           out, err);
      return 0;
    }

    warn_regime(c.n, p, c.r, err);
    const Regime regime = Regime::make(c.n, p, c.r);

    if (*simulate || *sweep) {
      std::vector<double> omegas;
      if (*sweep) {
        omegas = parse_grid(grid_text);
      } else {
        omegas.push_back(regime.effective_omega0(seed_size(c, regime)));
      }
      const SweepReport report = sweep_omega0(regime, omegas, c.trials, c.seed, workers);
      const std::string artifact = c.format == "csv" || (c.format.empty() && *sweep) ? sweep_csv(report) : to_json(report).dump(2) + "\n";
      if (!trial_log.empty()) write_file_atomic(trial_log, trial_log_ndjson(report));
      std::ostringstream summary;
      if (*simulate) {
        const SweepCell& cell = report.cells.front();
        summary << "a = " << cell.a << " (omega0 = " << fixed(cell.omega0_effective, 2) << "): supercritical "
                << fixed(cell.frac_super, 3) << ", subcritical " << fixed(cell.frac_sub, 3) << ", failure bound "
                << (cell.bound ? fixed(*cell.bound, 4) : std::string("n/a"));
      } else {
        summary << report.cells.size() << " cells x " << c.trials << " trials, ambiguous fraction "
                << fixed(report.ambiguous_fraction(), 4);
      }
      emit(c, artifact, summary.str(), out, err);
      return 0;
    }

    if (*martingale) {
      MartingaleCheckSpec spec;
      spec.n = c.n;
      spec.p = p;
      spec.r = c.r;
      spec.a = seed_size(c, regime);
      spec.t_probe = t_probe.value_or(regime.crit.tc);
      if (spec.t_probe > c.n) throw std::invalid_argument("--t-probe exceeds n");
      spec.trials = c.trials;
      spec.seed = c.seed;
      spec.workers = workers;
      const MartingaleCheckReport report = empirical_martingale_check(spec);
      if (!trace_csv.empty()) {
        ProcessParams params{c.r, {}};
        for (Vertex v = 0; v < spec.a; ++v) params.initially_infected.push_back(v);
        const Graph graph = sample_gnp({c.n, p, derive_seed(c.seed, {0})});
        const ExplorationTrace trace = run_exploration(graph, params);
        const auto horizon = std::max(default_martingale_horizon(regime.crit.t0, c.n), spec.t_probe);
        const PiProcess pi = PiProcess::from_table(pi_hat_table(horizon, p, c.r), trace.stopping_time);
        std::ostringstream csv;
        write_martingale_csv(csv, trace, pi, martingale_from_trace(trace, pi, spec.a, c.n));
        write_file_atomic(trace_csv, csv.str());
      }
      std::ostringstream summary;
      summary << "M(" << spec.t_probe << " ^ T): mean " << fixed(report.mean, 4) << " (z = " << fixed(report.z, 2)
              << "), var " << fixed(report.var, 3) << " vs ceiling " << fixed(report.ceiling, 3);
      emit(c, to_json(report).dump(2) + "\n", summary.str(), out, err);
      return 0;
    }

    if (*giant) {
      const GiantCheckReport report = giant_check(regime, seed_size(c, regime), c.trials, c.seed, workers);
      const std::string artifact = c.format == "csv" ? giant_csv(report) : to_json(report).dump(2) + "\n";
      std::ostringstream summary;
      summary << report.runs << " runs: near >= 3r/(4p) in " << report.near_ok << ", giant ok in " << report.giant_ok
              << ", stage 1 ok in " << report.stage1_ok << ", stage 2 ok in " << report.stage2_ok;
      emit(c, artifact, summary.str(), out, err);
      return 0;
    }

    if (*lemma3) {
      if (!c.omega0 && !c.a) throw std::invalid_argument("one of --a or --omega0 is required");
      const double omega = c.omega0 ? *c.omega0 : regime.effective_omega0(*c.a);
      const Lemma3Report report = lemma3_check(regime, omega, c.trials, c.seed, workers);
      std::ostringstream summary;
      summary << "early phase: failure " << fixed(report.failure_fraction, 3) << " vs bound "
              << fixed(report.bound, 4);
      emit(c, to_json(report).dump(2) + "\n", summary.str(), out, err);
      return 0;
    }
  } catch (const DegenerateRegime& e) {
    err << "degenerate regime: " << e.what() << '\n';
    return 3;
  } catch (const OutputError& e) {
    err << "output error: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace bootperc::cli
