#pragma once

// Cubic number fields given by a monic integer cubic, and the prime
// decomposition data that drives every local Euler factor.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cubic {

using BigInt = boost::multiprecision::cpp_int;

/// Malformed or mathematically invalid field/run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One prime ideal above p: residue degree f and ramification index e.
struct PrimeComponent {
  unsigned residue_degree = 1;
  unsigned ramification = 1;

  auto operator<=>(const PrimeComponent&) const = default;
};

/// Decomposition of a rational prime: components ordered by residue degree
/// ascending, then ramification descending. Sum of e*f equals the degree.
class SplittingType {
 public:
  SplittingType() = default;
  SplittingType(std::vector<PrimeComponent> components, unsigned degree = 3);

  /// Parses "(f,e)(f,e)..." e.g. "(1,2)(1,1)".
  static SplittingType parse(std::string_view text, unsigned degree = 3);

  [[nodiscard]] const std::vector<PrimeComponent>& components() const noexcept { return components_; }
  [[nodiscard]] unsigned degree_one_count() const noexcept;
  [[nodiscard]] bool ramified() const noexcept;

  /// Pattern name such as "P1*P1'*P1''", "P1*P2", "P3", "P1^2*P1'", "P1^3".
  [[nodiscard]] std::string name() const;
  /// Canonical "(f,e)..." form accepted by parse().
  [[nodiscard]] std::string encoded() const;

  bool operator==(const SplittingType&) const = default;

 private:
  std::vector<PrimeComponent> components_;
};

/// Monic cubic x^3 + c2 x^2 + c1 x + c0.
struct CubicPoly {
  std::int64_t c0 = 0;
  std::int64_t c1 = 0;
  std::int64_t c2 = 0;

  [[nodiscard]] BigInt discriminant() const;
  /// Discriminant reduced modulo p, computed without big integers.
  [[nodiscard]] std::uint64_t discriminant_mod(std::uint64_t p) const;
  [[nodiscard]] std::uint64_t eval_mod(std::uint64_t x, std::uint64_t p) const;
  [[nodiscard]] std::string to_string() const;
};

struct FieldSpec {
  std::string name;
  /// 3 for genuine cubic fields; 1 only for the "rationals" test hook.
  unsigned degree = 3;
  CubicPoly poly;
  BigInt disc;
  BigInt disc_sqfree_part;
  BigInt conductor_f;
  bool normal = false;
  /// [O_K : Z[theta]]; 1 unless an explicit field discriminant was supplied.
  BigInt index = 1;
  std::map<std::uint64_t, SplittingType> index_divisor_overrides;

  [[nodiscard]] bool is_rationals() const noexcept { return degree == 1; }
  /// |disc| as a double; the Voronoi-type expansions scale with it.
  [[nodiscard]] double abs_disc() const;
  [[nodiscard]] bool totally_real() const;
};

/// Validates and completes a field from polynomial (+ optional discriminant
/// and overrides): irreducibility, D = d f^2, normality, index primes.
FieldSpec make_field(std::string name, CubicPoly poly, const BigInt* disc = nullptr,
                     std::map<std::uint64_t, SplittingType> overrides = {});

/// Parses a key=value field document (see README for the keys).
FieldSpec parse_field_spec(std::string_view text);

/// Built-in fields: "cubic-nonnormal-2", "cubic-cyclic-7", and the degree-1
/// test hook "rationals" (a_K = 1 identically).
FieldSpec preset_field(std::string_view name);
std::vector<std::string> preset_names();

/// Preset name or path to a config document.
FieldSpec load_field(std::string_view name_or_path);

/// Number of distinct roots of poly modulo prime p (degree of gcd(x^p - x, f)).
unsigned count_roots_mod_p(const CubicPoly& poly, std::uint64_t p);

SplittingType splitting_type(const FieldSpec& field, std::uint64_t p);

/// a_K(p): number of prime ideals of norm p. Fast path used by the sieve.
unsigned degree_one_primes(const FieldSpec& field, std::uint64_t p);

/// a_K(p^k) for k = 0..kmax: coefficients of prod_i (1 - t^{f_i})^{-1}.
std::vector<std::int64_t> local_aK(const SplittingType& split, unsigned kmax);
std::vector<std::int64_t> local_aK(const FieldSpec& field, std::uint64_t p, unsigned kmax);

/// mu_K(p^k) for k = 0..kmax from mu(p^k) = -sum_{j=1..k} a(p^j) mu(p^{k-j}).
std::vector<std::int64_t> local_muK(const std::vector<std::int64_t>& local_a);

}  // namespace cubic
