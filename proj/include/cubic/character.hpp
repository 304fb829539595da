#pragma once

// Cubic Dirichlet characters modulo a prime q = 1 (mod 3), valued exactly in
// the Eisenstein integers Z[w], w = exp(2 pi i / 3).

#include <complex>
#include <cstdint>
#include <vector>

namespace cubic {

/// a + b*w with w^2 = -1 - w.
struct Eisenstein {
  std::int64_t a = 0;
  std::int64_t b = 0;

  friend Eisenstein operator+(Eisenstein x, Eisenstein y) { return {x.a + y.a, x.b + y.b}; }
  friend Eisenstein operator*(Eisenstein x, Eisenstein y) {
    return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a - x.b * y.b};
  }
  friend Eisenstein conj(Eisenstein x) { return {x.a - x.b, -x.b}; }
  bool operator==(const Eisenstein&) const = default;

  [[nodiscard]] bool is_rational() const noexcept { return b == 0; }
  [[nodiscard]] std::complex<double> to_complex() const;
};

class CubicCharacter {
 public:
  /// Character sending the least primitive root mod q to w.
  explicit CubicCharacter(std::uint64_t q);

  [[nodiscard]] std::uint64_t modulus() const noexcept { return q_; }
  /// 0 when q | n, otherwise w^k.
  [[nodiscard]] Eisenstein operator()(std::uint64_t n) const;
  [[nodiscard]] std::complex<double> complex_value(std::uint64_t n) const { return (*this)(n).to_complex(); }

 private:
  std::uint64_t q_;
  std::vector<std::uint8_t> index_mod3_;  // discrete log mod 3, per residue
};

/// (chi * conj(chi))(n) for n = 0..n_max (entry 0 unused), exact.
std::vector<Eisenstein> chi_times_conj_chi(const CubicCharacter& chi, std::uint64_t n_max);

}  // namespace cubic
