#pragma once

// Elementary integer number theory shared by every module: prime sieves,
// modular arithmetic, small factorizations and checked 128-bit narrowing.

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cubic {

__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

/// Thrown when a caller violates an operation's documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an exact integer result does not fit its storage type.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// All primes p <= limit in increasing order.
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

/// Trial-division factorization as (prime, exponent) pairs, primes ascending.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

/// Classical Moebius function.
int mobius(std::uint64_t n);

/// mu(0..limit) with mu(0) = 0.
std::vector<std::int8_t> mobius_table(std::uint64_t limit);

/// tau(0..limit), the number of divisors (tau(0) = 0).
std::vector<std::uint32_t> divisor_count_table(std::uint64_t limit);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

/// floor(y / m) for y >= 0, exact for any double y and integer m >= 1.
std::uint64_t floor_div(double y, std::uint64_t m);

/// Narrows an exact 128-bit value; throws OverflowError naming `what`.
std::int64_t narrow_i64(i128 v, const char* what);

std::string to_string(i128 v);

/// Binomial coefficient C(n, k) for small arguments, checked.
std::uint64_t binomial(unsigned n, unsigned k);

/// Compensated (Neumaier) summation; results are independent of the order
/// of equal-magnitude additions to well below double rounding noise.
class NeumaierSum {
 public:
  void add(double x) noexcept;
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace cubic
