#pragma once

// Command-line front end: sieve, verify and experiment subcommands.

#include "cubic/arith.hpp"
#include "cubic/field.hpp"
#include "cubic/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cubic::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitBadConfig = 2;

inline constexpr std::uint64_t kMinN = 1'000;
inline constexpr std::uint64_t kDefaultN = 1'000'000;

struct RunConfig {
  std::string command;
  std::string experiment;
  /// Preset names or field-config paths; empty selects the command's default.
  std::vector<std::string> fields;
  std::optional<std::uint64_t> N;
  std::optional<std::string> table;
  std::optional<double> X, Y, T, y;
  std::vector<double> Ts, ys;
  std::size_t samples = 33;
  std::string rho_method = "series_b_over_m";
  std::string normalization = "field_scaled";
  std::optional<std::string> output;
  std::string format = "csv";
  std::uint64_t seed = 1;
  unsigned threads = 0;
  unsigned l = 4;
  unsigned q = 2;
  std::string expr, balance_var = "y", lo = "1", hi, cone;

  [[nodiscard]] Json to_json() const;
  [[nodiscard]] Parallelism parallelism() const { return Parallelism{threads}; }
};

/// A field together with its tables and residue estimate.
struct FieldData {
  FieldSpec field;
  ArithTables tables;
  RhoEstimate rho;
};

/// Loads tables from cfg.table if set, else sieves `field_name` up to N;
/// an empty name takes the field recorded in the table file. Throws
/// PreconditionError if N < 10^3. Without `with_rho` the estimate is left empty.
FieldData prepare_field(const RunConfig& cfg, const std::string& field_name, std::uint64_t N, bool with_rho = true);

struct CheckResult {
  std::string check;
  std::string field;
  /// "pass", "fail" or "report".
  std::string status;
  std::string detail;
};

/// The exact-identity suite; report-only rows never affect the verdict.
std::vector<CheckResult> run_verify(const RunConfig& cfg, std::ostream& log);

/// Names accepted by the experiment subcommand.
std::vector<std::string> experiment_names();
ExperimentReport run_experiment(const RunConfig& cfg);

/// Full command line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cubic::cli
