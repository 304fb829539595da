#include "cubic/ideals.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace cubic;

namespace {

FactoredIdeal prime_power(const FieldSpec& k, std::uint64_t p, unsigned index, unsigned e) {
  return make_ideal({{primes_above(k, p).at(index), e}});
}

// sum over M | gcd(I, J) of N(M) mu(J / M), straight from the definition
std::int64_t ramanujan_by_divisors(const FactoredIdeal& J, const FactoredIdeal& I) {
  std::int64_t s = 0;
  for (const auto& M : ideal_divisors(ideal_gcd(I, J))) {
    s += static_cast<std::int64_t>(ideal_norm(M)) * ideal_mobius(ideal_divide(J, M));
  }
  return s;
}

}  // namespace

TEST_CASE("enumeration by norm") {
  const auto k = preset_field("cubic-nonnormal-2");
  const auto one = enumerate_ideals(k, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].is_unit());
  CHECK(one[0].to_string() == "1");
  CHECK(enumerate_ideals(k, 10).size() == 9);
  CHECK(enumerate_ideals(k, 0).empty());
  CHECK_THROWS_AS(enumerate_ideals(k, 1'000'001), PreconditionError);
  for (const char* name : {"cubic-nonnormal-2", "cubic-cyclic-7", "rationals"}) {
    const auto f = preset_field(name);
    const auto t = build_tables(f, 3000);
    const auto ideals = enumerate_ideals(f, 3000);
    const auto h = norm_histogram(ideals, 3000);
    for (std::uint64_t n = 1; n <= 3000; ++n) REQUIRE(h[n] == t.aK[n]);
    for (std::size_t i = 1; i < ideals.size(); ++i) {
      REQUIRE(ideal_norm(ideals[i - 1]) <= ideal_norm(ideals[i]));
      REQUIRE(ideals[i - 1] != ideals[i]);
    }
  }
}

TEST_CASE("factor strings and CSV") {
  const auto k = preset_field("cubic-nonnormal-2");
  const auto I = ideal_mul(prime_power(k, 2, 0, 3), prime_power(k, 5, 1, 1));
  CHECK(I.to_string() == "2.0^3(1)·5.1(2)");
  CHECK(ideal_norm(I) == 8 * 25);
  std::ostringstream os;
  write_ideals_csv({FactoredIdeal{}, I}, os);
  CHECK(os.str() == "norm,factorization\n1,1\n200,2.0^3(1)·5.1(2)\n");
}

TEST_CASE("gcd, divide and Moebius") {
  const auto k = preset_field("cubic-cyclic-7");
  const FactoredIdeal unit;
  const auto P = prime_power(k, 13, 0, 1);
  const auto Q = prime_power(k, 2, 0, 1);  // inert, norm 8
  CHECK(ideal_mobius(unit) == 1);
  CHECK(ideal_gcd(P, unit) == unit);
  CHECK(ideal_mobius(ideal_mul(P, P)) == 0);
  CHECK(ideal_mobius(ideal_mul(P, Q)) == 1);
  CHECK(ideal_mobius(P) == -1);
  CHECK(ideal_divide(ideal_mul(P, Q), Q) == P);
  CHECK_THROWS_AS(ideal_divide(P, Q), PreconditionError);
  CHECK(ideal_norm(Q) == 8);
}

TEST_CASE("random ideal properties") {
  std::mt19937_64 rng(20240531);
  for (const char* name : {"cubic-nonnormal-2", "cubic-cyclic-7"}) {
    const auto k = preset_field(name);
    for (int trial = 0; trial < 100; ++trial) {
      const auto I = random_ideal(k, rng, 100'000);
      const auto J = random_ideal(k, rng, 100'000);
      const auto L = random_ideal(k, rng, 1000);
      REQUIRE(ideal_norm(I) <= 100'000);
      REQUIRE(ideal_norm(ideal_mul(I, J)) == ideal_norm(I) * ideal_norm(J));
      const auto G = ideal_gcd(I, J);
      REQUIRE(ideal_divides(G, I));
      REQUIRE(ideal_divides(G, J));
      REQUIRE(ideal_divide(ideal_mul(I, J), J) == I);
      REQUIRE(ramanujan_ideal(J, I) == ramanujan_by_divisors(J, I));
      // c_J(I) only sees gcd(I, J): multiply I by a part coprime to J
      FactoredIdeal coprime;
      for (const auto& [P, e] : L.factors) {
        if (ideal_gcd(make_ideal({{P, 1}}), J).is_unit()) coprime = ideal_mul(coprime, make_ideal({{P, e}}));
      }
      REQUIRE(ramanujan_ideal(J, ideal_mul(ideal_gcd(I, J), coprime)) == ramanujan_ideal(J, I));
    }
  }
}

TEST_CASE("ideal Ramanujan sum special cases") {
  const auto k = preset_field("cubic-cyclic-7");
  const FactoredIdeal unit;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto I = random_ideal(k, rng, 10'000);
    CHECK(ramanujan_ideal(unit, I) == 1);
    CHECK(ramanujan_ideal(I, unit) == ideal_mobius(I));
  }
  const auto P = prime_power(k, 13, 0, 1);
  CHECK(ramanujan_ideal(P, P) == 12);
  CHECK(ramanujan_ideal(P, prime_power(k, 13, 1, 1)) == -1);
  CHECK(ramanujan_ideal(P, ideal_mul(P, prime_power(k, 29, 2, 2))) == 12);
}

TEST_CASE("rationals hook reproduces classical Ramanujan sums") {
  const auto q = preset_field("rationals");
  const auto ideals = enumerate_ideals(q, 100);
  for (const auto& J : ideals) {
    for (const auto& I : ideals) {
      REQUIRE(ramanujan_ideal(J, I) == classical_ramanujan(ideal_norm(J), ideal_norm(I)));
    }
  }
}

TEST_CASE("divisor collapse of the sum over I") {
  for (const char* name : {"cubic-nonnormal-2", "cubic-cyclic-7"}) {
    const auto k = preset_field(name);
    const auto t = build_tables(k, 1000);
    const auto ideals = enumerate_ideals(k, 500);
    CHECK(sum_cJ_over_I(t, FactoredIdeal{}, 777.5) == partial_A(t, 777.5));
    CHECK(sum_cJ_over_I(t, ideals[3], 0.5) == 0);
    CHECK_THROWS_AS(sum_cJ_over_I(t, FactoredIdeal{}, 1001.0), PreconditionError);
    for (const auto& J : ideals) {
      if (ideal_norm(J) > 50) break;
      for (double Y : {10.0, 100.0, 500.0}) {
        std::int64_t naive = 0;
        for (const auto& I : ideals) {
          if (static_cast<double>(ideal_norm(I)) > Y) break;
          naive += ramanujan_ideal(J, I);
        }
        REQUIRE(sum_cJ_over_I(t, J, Y) == naive);
      }
    }
  }
}
