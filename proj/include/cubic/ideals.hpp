#pragma once

// Integral ideals of O_K in factored form: prime-ideal labels with
// exponents. Enough for norms, divisibility, gcd, Moebius and the
// ideal-level Ramanujan sum; generators are never constructed.

#include "cubic/arith.hpp"
#include "cubic/field.hpp"

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace cubic {

/// The index-th prime above p, in the order of splitting_type(field, p).
struct PrimeIdealLabel {
  std::uint64_t p = 0;
  unsigned index = 0;
  unsigned f = 1;
  unsigned e = 1;

  [[nodiscard]] std::uint64_t norm() const;
  bool operator==(const PrimeIdealLabel& o) const { return p == o.p && index == o.index; }
  std::strong_ordering operator<=>(const PrimeIdealLabel& o) const {
    if (auto c = p <=> o.p; c != 0) return c;
    return index <=> o.index;
  }
};

struct FactoredIdeal {
  /// Strictly increasing labels, exponents >= 1; empty means the unit ideal.
  std::vector<std::pair<PrimeIdealLabel, unsigned>> factors;

  [[nodiscard]] bool is_unit() const noexcept { return factors.empty(); }
  /// "1" for the unit ideal, else e.g. "2.0^3(1)·5.1(2)": p.index^exponent(f).
  [[nodiscard]] std::string to_string() const;
  bool operator==(const FactoredIdeal&) const = default;
  std::strong_ordering operator<=>(const FactoredIdeal& o) const { return factors <=> o.factors; }
};

/// Prime ideals above p, indexed 0.. in splitting-type order.
std::vector<PrimeIdealLabel> primes_above(const FieldSpec& field, std::uint64_t p);

/// Builds a factored ideal from (label, exponent) pairs in any order;
/// repeated labels accumulate, zero exponents are dropped.
FactoredIdeal make_ideal(std::vector<std::pair<PrimeIdealLabel, unsigned>> factors);

/// Norm as a 64-bit integer; throws OverflowError if it does not fit.
std::uint64_t ideal_norm(const FactoredIdeal& I);
FactoredIdeal ideal_gcd(const FactoredIdeal& I, const FactoredIdeal& J);
FactoredIdeal ideal_mul(const FactoredIdeal& I, const FactoredIdeal& J);
bool ideal_divides(const FactoredIdeal& M, const FactoredIdeal& J);
/// J / M; throws PreconditionError unless M | J.
FactoredIdeal ideal_divide(const FactoredIdeal& J, const FactoredIdeal& M);
int ideal_mobius(const FactoredIdeal& I);
std::vector<FactoredIdeal> ideal_divisors(const FactoredIdeal& I);

inline constexpr std::uint64_t kMaxEnumerationNorm = 1'000'000;

/// Every integral ideal of norm <= B exactly once, sorted by norm and then
/// by factorization. Throws PreconditionError for B > 10^6.
std::vector<FactoredIdeal> enumerate_ideals(const FieldSpec& field, std::uint64_t B);

/// Number of ideals of each norm 0..B in an enumeration (entry 0 is zero).
std::vector<std::int64_t> norm_histogram(const std::vector<FactoredIdeal>& ideals, std::uint64_t B);

/// c_J(I) = sum over M | gcd(I, J) of N(M) mu(J / M).
std::int64_t ramanujan_ideal(const FactoredIdeal& J, const FactoredIdeal& I);

/// sum over N(I) <= Y of c_J(I), via sum_{M | J} N(M) mu(J/M) A_K(Y / N(M)).
std::int64_t sum_cJ_over_I(const ArithTables& tables, const FactoredIdeal& J, double Y);

/// Random ideal of norm <= max_norm built from primes above p <= max_norm.
FactoredIdeal random_ideal(const FieldSpec& field, std::mt19937_64& rng, std::uint64_t max_norm);

/// CSV rows "norm,factorization".
void write_ideals_csv(const std::vector<FactoredIdeal>& ideals, std::ostream& out);

}  // namespace cubic
