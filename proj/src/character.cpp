#include "cubic/character.hpp"

#include "cubic/numtheory.hpp"

#include <cmath>
#include <string>

namespace cubic {

std::complex<double> Eisenstein::to_complex() const {
  const double half_sqrt3 = std::sqrt(3.0) / 2.0;
  return {static_cast<double>(a) - 0.5 * static_cast<double>(b), half_sqrt3 * static_cast<double>(b)};
}

CubicCharacter::CubicCharacter(std::uint64_t q) : q_(q) {
  if (!is_prime(q) || q % 3 != 1) {
    throw PreconditionError("cubic character needs a prime modulus = 1 mod 3, got " + std::to_string(q));
  }
  const auto factors = factorize(q - 1);
  std::uint64_t g = 2;
  for (;; ++g) {
    bool primitive = true;
    for (const auto& [r, e] : factors) {
      (void)e;
      if (powmod(g, (q - 1) / r, q) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) break;
  }
  index_mod3_.assign(q, 0);
  std::uint64_t x = 1;
  for (std::uint64_t k = 0; k + 1 < q; ++k) {
    index_mod3_[x] = static_cast<std::uint8_t>(k % 3);
    x = x * g % q;
  }
}

Eisenstein CubicCharacter::operator()(std::uint64_t n) const {
  const std::uint64_t r = n % q_;
  if (r == 0) return {0, 0};
  switch (index_mod3_[r]) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    default: return {-1, -1};
  }
}

std::vector<Eisenstein> chi_times_conj_chi(const CubicCharacter& chi, std::uint64_t n_max) {
  std::vector<Eisenstein> out(n_max + 1);
  for (std::uint64_t x = 1; x <= n_max; ++x) {
    const Eisenstein cx = chi(x);
    if (cx == Eisenstein{}) continue;
    for (std::uint64_t y = 1; x * y <= n_max; ++y) out[x * y] = out[x * y] + cx * conj(chi(y));
  }
  return out;
}

}  // namespace cubic
