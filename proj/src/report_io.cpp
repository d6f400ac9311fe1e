#include "bootperc/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace bootperc {

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw OutputError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw OutputError("cannot move output into place at " + path.string());
  }
}

std::string format_double(double x) {
  char buf[64];
  const bool integral = std::abs(x) < 1e15 && x == std::trunc(x);
  const auto result = integral ? std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed)
                               : std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, result.ptr);
}

nlohmann::json to_json(const CriticalQuantities& q, unsigned r) {
  return {
      {"t0", q.t0},
      {"tc", q.tc},
      {"ac", q.ac},
      {"tc_asymptotic", q.tc_asymptotic},
      {"ac_asymptotic", q.ac_asymptotic},
      {"pi_hat_table", q.pi_hat_table},
      {"rho", rho_giant(3.0 * r / 4.0)},
  };
}

std::string f_table_csv(const CriticalQuantities& q) {
  std::ostringstream out;
  out << "t,f_t\n";
  for (std::size_t t = 0; t < q.f_table.size(); ++t) out << t << ',' << format_double(q.f_table[t]) << '\n';
  return out.str();
}

nlohmann::json to_json(const TrialOutcome& o) {
  nlohmann::json j = {
      {"seed", o.seed},
      {"final_size", o.final_size},
      {"T", o.stopping_time},
      {"classification", to_string(o.classification)},
      {"t0_reached", o.t0_reached},
  };
  j["infected_at_t0"] = o.infected_at_t0 ? nlohmann::json(*o.infected_at_t0) : nlohmann::json(nullptr);
  return j;
}

std::string sweep_csv(const SweepReport& report) {
  std::ostringstream out;
  out << "omega0,a,trials,frac_sub,frac_super,frac_ambig,mean_final,bound\n";
  for (const auto& c : report.cells) {
    out << format_double(c.omega0) << ',' << c.a << ',' << c.trials << ',' << format_double(c.frac_sub) << ','
        << format_double(c.frac_super) << ',' << format_double(c.frac_ambig) << ',' << format_double(c.mean_final)
        << ',' << (c.bound ? format_double(*c.bound) : "NA") << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const SweepReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    std::vector<std::size_t> finals;
    finals.reserve(c.outcomes.size());
    for (const auto& o : c.outcomes) finals.push_back(o.final_size);
    cells.push_back({
        {"omega0", c.omega0},
        {"omega0_effective", c.omega0_effective},
        {"a", c.a},
        {"trials", c.trials},
        {"frac_sub", c.frac_sub},
        {"frac_super", c.frac_super},
        {"frac_ambig", c.frac_ambig},
        {"mean_final", c.mean_final},
        {"bound", c.bound ? nlohmann::json(*c.bound) : nlohmann::json(nullptr)},
        {"bound_exempt", c.bound_exempt},
        {"failure_fraction", c.failure_fraction},
        {"pass_line", c.pass_line},
        {"bound_ok", c.bound_ok},
        {"final_sizes", finals},
    });
  }
  return {
      {"n", report.n}, {"p", report.p}, {"r", report.r},
      {"t0", report.t0}, {"tc", report.tc}, {"ac", report.ac},
      {"seed", report.seed},
      {"ambiguous_fraction", report.ambiguous_fraction()},
      {"cells", cells},
  };
}

std::string trial_log_ndjson(const SweepReport& report) {
  std::string out;
  for (std::size_t c = 0; c < report.cells.size(); ++c) {
    for (const auto& o : report.cells[c].outcomes) {
      nlohmann::json line = to_json(o);
      line["cell"] = c;
      line["a"] = report.cells[c].a;
      out += line.dump();
      out += '\n';
    }
  }
  return out;
}

nlohmann::json to_json(const MartingaleCheckReport& report) {
  return {
      {"mean", report.mean},
      {"stderr", report.stderr_mean},
      {"z", report.z},
      {"var", report.var},
      {"ceiling", report.ceiling},
      {"trials", report.trials},
      {"variance_flagged", report.variance_flagged},
      {"difference_violations", report.difference_violations},
      {"max_difference_ratio", report.max_difference_ratio},
      {"stopping_time_mismatches", report.stopping_time_mismatches},
  };
}

nlohmann::json to_json(const GiantCheckReport& report) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& run : report.details) {
    nlohmann::json j = {
        {"seed", run.seed},           {"T", run.stopping_time},       {"reserved", run.reserved},
        {"near_size", run.near_size}, {"w_size", run.w_size},         {"giant_size", run.giant_size},
        {"near_ok", run.near_ok},     {"giant_ok", run.giant_ok},
    };
    if (run.completion) {
      const auto& c = *run.completion;
      j["completion"] = {
          {"u_prime_size", c.u_prime_size},   {"stage1_count", c.stage1_count},
          {"stage1_threshold", c.stage1_threshold}, {"stage1_ok", c.stage1_ok},
          {"b_prime_size", c.b_prime_size},   {"stage2_uninfected", c.stage2_uninfected},
          {"stage2_limit", c.stage2_limit},   {"stage2_ok", c.stage2_ok},
      };
    } else {
      j["completion"] = nullptr;
    }
    runs.push_back(std::move(j));
  }
  return {
      {"a", report.a},
      {"runs", report.runs},
      {"attempts", report.attempts},
      {"near_threshold", report.near_threshold},
      {"near_reference", report.near_reference},
      {"near_mean", report.near_mean},
      {"rho", report.rho},
      {"near_ok", report.near_ok},
      {"giant_ok", report.giant_ok},
      {"stage1_ok", report.stage1_ok},
      {"stage2_ok", report.stage2_ok},
      {"details", runs},
  };
}

std::string giant_csv(const GiantCheckReport& report) {
  std::ostringstream out;
  out << "seed,T,reserved,near_size,w_size,giant_size,near_ok,giant_ok,stage1_count,stage2_uninfected\n";
  for (const auto& run : report.details) {
    out << run.seed << ',' << run.stopping_time << ',' << run.reserved << ',' << run.near_size << ',' << run.w_size
        << ',' << run.giant_size << ',' << run.near_ok << ',' << run.giant_ok << ',';
    if (run.completion)
      out << run.completion->stage1_count << ',' << run.completion->stage2_uninfected;
    else
      out << "NA,NA";
    out << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const Lemma3Report& report) {
  return {
      {"a", report.a},
      {"omega0", report.omega0},
      {"trials", report.trials},
      {"success_fraction", report.success_fraction},
      {"failure_fraction", report.failure_fraction},
      {"bound", report.bound},
      {"pass_line", report.pass_line},
      {"hypotheses_ok", report.hypotheses_ok},
      {"pass", report.pass},
  };
}

}  // namespace bootperc
