#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "bootperc/critical.hpp"
#include "bootperc/experiments.hpp"
#include "bootperc/martingale.hpp"

namespace bootperc {

/// An output file could not be written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes `content` to a sibling temporary file and renames it over `path`,
/// so readers never observe a partial file. Throws OutputError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// {t0, tc, ac, tc_asymptotic, ac_asymptotic, pi_hat_table, rho}; rho is
/// the giant density at c = 3r/4.
nlohmann::json to_json(const CriticalQuantities& q, unsigned r);
/// "t,f_t" rows for t = 0..floor(t0).
std::string f_table_csv(const CriticalQuantities& q);

nlohmann::json to_json(const TrialOutcome& o);
/// One row per cell: omega0,a,trials,frac_sub,frac_super,frac_ambig,mean_final,bound.
std::string sweep_csv(const SweepReport& report);
/// Parameters, critical quantities, cells (with final-size lists) and the
/// overall ambiguous fraction.
nlohmann::json to_json(const SweepReport& report);
/// Newline-delimited JSON, one TrialOutcome per line, cells in order.
std::string trial_log_ndjson(const SweepReport& report);

/// {mean, stderr, z, var, ceiling} plus diagnostic counters.
nlohmann::json to_json(const MartingaleCheckReport& report);

nlohmann::json to_json(const GiantCheckReport& report);
/// One row per run.
std::string giant_csv(const GiantCheckReport& report);

nlohmann::json to_json(const Lemma3Report& report);

/// Shortest round-trip text for a double.
std::string format_double(double x);

}  // namespace bootperc
