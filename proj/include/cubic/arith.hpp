#pragma once

// Sieved Dedekind-zeta coefficient tables and the arithmetic built on them:
// partial sums, the residue rho_K, divisor moments and Ramanujan sums.

#include "cubic/field.hpp"
#include "cubic/numtheory.hpp"
#include "cubic/parallel.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cubic {

inline constexpr std::uint64_t kMaxTableN = 100'000'000;

/// Frozen coefficient tables for n <= N. Index 0 holds zero in every array
/// so that entry n is simply aK[n]; the prefix arrays satisfy A_prefix[n] =
/// sum_{k<=n} aK[k].
struct ArithTables {
  std::string field_name;
  std::uint64_t N = 0;
  std::vector<std::int32_t> aK;
  std::vector<std::int32_t> muK;
  std::vector<std::int32_t> b;
  std::vector<std::int64_t> A_prefix;
  std::vector<std::int64_t> M_prefix;

  /// Bytes held per table entry (documents the 10^8 memory budget).
  static constexpr std::size_t kBytesPerEntry = 3 * sizeof(std::int32_t) + 2 * sizeof(std::int64_t);
};

/// Builds a_K, mu_K and b for 1 <= n <= N by a parallel segmented
/// multiplicative sieve. Throws PreconditionError outside [1, 10^8].
ArithTables build_tables(const FieldSpec& field, std::uint64_t N, Parallelism par = {});

/// Recomputes both prefix arrays from aK and muK with overflow detection.
void rebuild_prefix_sums(ArithTables& tables);

/// A_K(x) and M_K(x) for real 0 <= x <= N.
std::int64_t partial_A(const ArithTables& tables, double x);
std::int64_t partial_M(const ArithTables& tables, double x);

/// A_K(floor(y / m)) and M_K(floor(y / m)) with the quotient taken exactly.
std::int64_t partial_A_quot(const ArithTables& tables, double y, std::uint64_t m);
std::int64_t partial_M_quot(const ArithTables& tables, double y, std::uint64_t m);

enum class RhoMethod { series_b_over_m, regression_on_A };

std::string to_string(RhoMethod method);
RhoMethod parse_rho_method(std::string_view text);

struct RhoEstimate {
  double value = 0.0;
  double std_error = 0.0;
  RhoMethod method = RhoMethod::series_b_over_m;
  std::uint64_t B = 0;
};

/// P_K(x) = A_K(x) - rho x.
double error_P(const ArithTables& tables, const RhoEstimate& rho, double x);

/// One estimator of the residue from cutoff B (10^3 <= B <= N).
RhoEstimate estimate_rho(const ArithTables& tables, std::uint64_t B, RhoMethod method);

class RhoDisagreement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RhoCrossCheck {
  RhoEstimate series;
  RhoEstimate regression;
  double combined_std_error = 0.0;
};

/// Runs both estimators and throws RhoDisagreement if they differ by more
/// than three combined standard errors.
RhoCrossCheck cross_check_rho(const ArithTables& tables, std::uint64_t B);

/// Both estimators, then the requested one (after the cross-check passes).
RhoEstimate checked_rho(const ArithTables& tables, std::uint64_t B, RhoMethod method);

/// c_m(n) = sum_{d | gcd(m,n)} d mu(m/d).
std::int64_t classical_ramanujan(std::uint64_t m, std::uint64_t n);

/// tau_l(n) for n = 0..limit (entry 0 is zero).
std::vector<std::uint64_t> tau_l_table(unsigned l, std::uint64_t limit);

/// sum_{n<=x} tau_l(n)^q, exact; throws OverflowError past 64 bits.
std::uint64_t tau_power_sum(unsigned l, unsigned q, std::uint64_t x);

/// sum over m != n <= T of tau_4(m)^2 tau_4(n)^2 / ((mn)^{2/3} |m^{1/3} - n^{1/3}|).
double lemma7_sum(std::uint64_t T, Parallelism par = {});

class TableFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary table format: magic "CUBICTBL", u32 version, u32 name length,
/// name bytes, u64 N, then aK, muK, b as little-endian int64 arrays over
/// n = 1..N. Prefix sums are rebuilt on load.
void write_table(const ArithTables& tables, const std::filesystem::path& path);
ArithTables read_table(const std::filesystem::path& path);

/// CSV rows "n,aK,muK,b,A,M" for n <= min(N, limit).
void write_table_csv(const ArithTables& tables, std::ostream& out, std::uint64_t limit = 10'000);

}  // namespace cubic
