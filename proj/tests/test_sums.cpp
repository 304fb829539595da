#include "cubic/ideals.hpp"
#include "cubic/sums.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace cubic;
using std::numbers::pi;

namespace {

struct Fixture {
  FieldSpec field;
  ArithTables tables;
  RhoEstimate rho;
};

const Fixture& fixture(const char* name) {
  static const Fixture nonnormal = [] {
    Fixture f{preset_field("cubic-nonnormal-2"), {}, {}};
    f.tables = build_tables(f.field, 400'000);
    f.rho = checked_rho(f.tables, 400'000, RhoMethod::series_b_over_m);
    return f;
  }();
  static const Fixture cyclic = [] {
    Fixture f{preset_field("cubic-cyclic-7"), {}, {}};
    f.tables = build_tables(f.field, 400'000);
    f.rho = checked_rho(f.tables, 400'000, RhoMethod::series_b_over_m);
    return f;
  }();
  static const Fixture rationals = [] {
    Fixture f{preset_field("rationals"), {}, {}};
    f.tables = build_tables(f.field, 100'000);
    f.rho = checked_rho(f.tables, 100'000, RhoMethod::series_b_over_m);
    return f;
  }();
  const std::string n = name;
  if (n == "rationals") return rationals;
  return n == "cubic-cyclic-7" ? cyclic : nonnormal;
}

// integral over [lo, hi] of (A - rho Y)^2 with A constant, in closed form
double cell_square(double A, double rho, double lo, double hi) {
  const double u = A - rho * lo;
  const double v = A - rho * hi;
  return (u * u * u - v * v * v) / (3.0 * rho);
}

}  // namespace

TEST_CASE("S_K special values") {
  for (const char* name : {"cubic-nonnormal-2", "cubic-cyclic-7"}) {
    const auto& f = fixture(name);
    for (double Y : {1.0, 17.5, 1000.0}) {
      CHECK(S_K_direct(f.field, f.tables, 1, Y).value == partial_A(f.tables, Y));
      CHECK(S_K_reduced(f.tables, 1, Y).value == partial_A(f.tables, Y));
    }
    for (double X : {1.0, 7.0, 50.0}) CHECK(S_K_direct(f.field, f.tables, X, 1).value == partial_M(f.tables, X));
    CHECK(S_K_reduced(f.tables, 0.5, 100).value == 0);
  }
  const auto& k = fixture("cubic-nonnormal-2");
  for (double Y : {10.0, 99.0, 1000.0}) CHECK(S_K_reduced(k.tables, 2, Y).value == 2 * partial_A(k.tables, Y / 2));
  const auto& c = fixture("cubic-cyclic-7");
  CHECK(S_K_direct(c.field, c.tables, 20, 200).value == S_K_reduced(c.tables, 20, 200).value);
}

TEST_CASE("cross-path identity for S_K") {
  for (const char* name : {"cubic-nonnormal-2", "cubic-cyclic-7"}) {
    const auto& f = fixture(name);
    for (int X = 1; X <= 50; ++X) {
      for (double Y : {10.0, 100.0, 1000.0, 2345.5}) {
        REQUIRE(S_K_direct(f.field, f.tables, X, Y).value == S_K_reduced(f.tables, X, Y).value);
      }
    }
    CHECK(S_K_direct(f.field, f.tables, 37.9, 512.25).value == S_K_reduced(f.tables, 37.9, 512.25).value);
  }
  const auto& f = fixture("cubic-cyclic-7");
  CHECK_THROWS_AS(S_K_direct(f.field, f.tables, 1001, 10), PreconditionError);
  CHECK_THROWS_AS(S_K_reduced(f.tables, 10, 400'001), PreconditionError);
}

TEST_CASE("remainder forms") {
  for (const char* name : {"cubic-nonnormal-2", "cubic-cyclic-7"}) {
    const auto& f = fixture(name);
    for (double Y : {100.0, 5000.5, 300'000.0}) {
      CHECK(remainder_R(f.tables, f.rho, 1, Y) == error_P(f.tables, f.rho, Y));
    }
    for (double X : {3.0, 20.0, 100.0}) {
      const double Y = 200'000.0;
      const auto r = S_K_reduced(f.tables, X, Y, f.rho);
      REQUIRE(r.remainder.has_value());
      CHECK(*r.remainder == doctest::Approx(remainder_R(f.tables, f.rho, X, Y)).epsilon(1e-9).scale(Y));
    }
    const auto c = cross_check_rho(f.tables, 400'000);
    const double Y = 300'000;
    const double diff = std::fabs(remainder_R(f.tables, c.series, 10, Y) - remainder_R(f.tables, c.regression, 10, Y));
    CHECK(diff <= 3.0 * c.combined_std_error * Y);
  }
}

TEST_CASE("truncated Voronoi sum") {
  for (const char* name : {"cubic-nonnormal-2", "cubic-cyclic-7"}) {
    const auto& f = fixture(name);
    const double D = f.field.abs_disc();
    const double phase = f.field.totally_real() ? 0.0 : -pi / 2;
    for (double Y : {1234.5, 150'000.0}) {
      for (double y : {1.0, 8.0, 64.0}) {
        const auto v = voronoi_P1(f.field, f.tables, f.rho, Y, y);
        double direct = 0.0;
        for (std::uint64_t n = 1; n <= static_cast<std::uint64_t>(y); ++n) {
          const double a = static_cast<double>(oracle::ideal_count(f.field.poly, n));
          direct += a * std::pow(n, -2.0 / 3.0) * std::cos(6 * pi * std::cbrt(n * Y / D) + phase);
        }
        direct *= std::pow(D, 1.0 / 6.0) * std::cbrt(Y) / (std::sqrt(3.0) * pi);
        CHECK(v.P1 == doctest::Approx(direct).epsilon(1e-11).scale(1.0));
        // P1 + P2 reproduces P_K to within one rounding of the subtraction
        CHECK(std::fabs((v.P1 + v.P2) - v.P_K) <= std::nextafter(std::fabs(v.P_K), INFINITY) - std::fabs(v.P_K));
        CHECK(v.P_K == error_P(f.tables, f.rho, Y));
        const auto again = voronoi_P1(f.field, f.tables, f.rho, Y, y);
        CHECK(again.P1 == v.P1);
        CHECK(again.P2 == v.P2);
      }
    }
    CHECK_THROWS_AS(voronoi_P1(f.field, f.tables, f.rho, 100, 200), PreconditionError);
    CHECK_THROWS_AS(voronoi_P1(f.field, f.tables, f.rho, 100, 0.5), PreconditionError);
    const auto lit = voronoi_P1(f.field, f.tables, f.rho, 1000, 1, VoronoiNormalization::literal);
    CHECK(lit.P1 == doctest::Approx(std::cbrt(1000.0) / (std::sqrt(3.0) * pi) * std::cos(6 * pi * 10)));
  }
  // the cyclic field has no ideals of norm 2..6, so y in [1, 7) gives the same sum
  const auto& c = fixture("cubic-cyclic-7");
  CHECK(voronoi_P1(c.field, c.tables, c.rho, 5000, 6.9).P1 == voronoi_P1(c.field, c.tables, c.rho, 5000, 1).P1);
}

TEST_CASE("truncation scan reports an exponent") {
  const auto& f = fixture("cubic-nonnormal-2");
  const auto scan = voronoi_truncation_scan(f.field, f.tables, f.rho, 1e5, 2e5, 40, {8, 64});
  REQUIRE(scan.median_abs_P2.size() == 2);
  CHECK(std::isfinite(scan.fitted_exponent));
  CHECK(scan.fitted_exponent == doctest::Approx(std::log(scan.median_abs_P2[1] / scan.median_abs_P2[0]) / std::log(8.0)));
}

TEST_CASE("mean square of P2 against a fine composite rule") {
  const auto& f = fixture("cubic-nonnormal-2");
  const double T = 1000;
  for (double y : {1.0, 4.0}) {
    const double got = meansquare_P2(f.field, f.tables, f.rho, T, y);
    // Simpson with 16 subintervals per unit cell, evaluating P2 through the public API
    double ref = 0.0;
    for (double k = T; k < 2 * T; k += 1.0) {
      const int n = 16;
      for (int i = 0; i < n; ++i) {
        const double a = k + i / 16.0;
        const double b = a + 1.0 / 16.0;
        auto p2sq = [&](double Y) {
          const double A = static_cast<double>(partial_A(f.tables, k + 0.5));
          const VoronoiValue v = voronoi_P1(f.field, f.tables, f.rho, Y, y);
          const double p2 = A - f.rho.value * Y - v.P1;
          return p2 * p2;
        };
        ref += (b - a) / 6.0 * (p2sq(a) + 4.0 * p2sq(0.5 * (a + b)) + p2sq(b));
      }
    }
    CHECK(got == doctest::Approx(ref).epsilon(1e-7));
    CHECK(got > 0.0);
  }
  CHECK_THROWS_AS(meansquare_P2(f.field, f.tables, f.rho, 1000, 11), PreconditionError);
  CHECK_THROWS_AS(meansquare_P2(f.field, f.tables, f.rho, 300'000, 2), PreconditionError);
}

TEST_CASE("c(X) for the rationals hook against zeta(4/3)") {
  const auto& q = fixture("rationals");
  // zeta(4/3) by Euler-Maclaurin: sum to N plus integral tail and half-term
  const double Nn = 1e6;
  double zeta = 0.0;
  for (double n = Nn; n >= 1; n -= 1) zeta += std::pow(n, -4.0 / 3.0);
  zeta += 3.0 * std::pow(Nn, -1.0 / 3.0) - 0.5 * std::pow(Nn, -4.0 / 3.0);
  const auto c1 = compute_cX(q.field, q.tables, 1, 1'000'000, 0.1);
  const double truth1 = zeta / (6 * pi * pi);
  CHECK(c1.value <= truth1 * (1 + 1e-12));
  CHECK(truth1 <= c1.value + c1.tail_bound);
  // X = 10: the inner series is zeta(4/3) for every (m1, m2), so only the outer sum remains
  const auto mu = mobius_table(10);
  auto mertens = [&](std::uint64_t x) {
    std::int64_t s = 0;
    for (std::uint64_t n = 1; n <= x; ++n) s += mu[n];
    return s;
  };
  double outer = 0.0;
  for (std::uint64_t m = 1; m <= 10; ++m) {
    for (std::uint64_t m1 = 1; m * m1 <= 10; ++m1) {
      for (std::uint64_t m2 = 1; m * m2 <= 10; ++m2) {
        if (gcd_u64(m1, m2) != 1) continue;
        outer += std::pow(m, 4.0 / 3.0) * mertens(10 / (m * m1)) * mertens(10 / (m * m2));
      }
    }
  }
  const auto c10 = compute_cX(q.field, q.tables, 10, 1'000'000, 0.1);
  CHECK(c10.value == doctest::Approx(outer * c1.value).epsilon(1e-9));
}

TEST_CASE("c(X) consistency") {
  for (const char* name : {"cubic-nonnormal-2", "cubic-cyclic-7"}) {
    const auto& f = fixture(name);
    const auto small = compute_cX(f.field, f.tables, 10, 1'000'000, 0.1);
    const auto large = compute_cX(f.field, f.tables, 10, 2'000'000, 0.1);
    CHECK(std::fabs(large.value - small.value) <= small.tail_bound);
    CHECK(large.relative_tail < small.relative_tail);
    CHECK_THROWS_AS(compute_cX(f.field, f.tables, 10, 1000), PreconditionError);
    CHECK_THROWS_AS(compute_cX(f.field, f.tables, 1001), PreconditionError);
    // X = 1 is the inner series alone, sum a(n)^2 n^{-4/3} / (6 pi^2)
    const auto c1 = compute_cX(f.field, f.tables, 1, 1'000'000, 0.1);
    double direct = 0.0;
    for (std::uint64_t n = 1; n <= 400'000; ++n) direct += std::pow(f.tables.aK[n], 2) * std::pow(n, -4.0 / 3.0);
    direct /= 6 * pi * pi;
    CHECK(direct < c1.value + c1.tail_bound);
    CHECK(direct > 0.5 * c1.value);
    // ratio c(10)/c(1) from truncated n-sums, where the truncation largely cancels
    double num = 0.0;
    const auto& t = f.tables;
    for (std::uint64_t m = 1; m <= 10; ++m) {
      for (std::uint64_t m1 = 1; m * m1 <= 10; ++m1) {
        for (std::uint64_t m2 = 1; m * m2 <= 10; ++m2) {
          if (gcd_u64(m1, m2) != 1) continue;
          const double outer = std::pow(m, 4.0 / 3.0) * t.aK[m * m1] * t.aK[m * m2] *
                               static_cast<double>(partial_M(t, 10.0 / (m * m1))) *
                               static_cast<double>(partial_M(t, 10.0 / (m * m2)));
          if (outer == 0.0) continue;
          double inner = 0.0;
          for (std::uint64_t n = 1; n * std::max(m1, m2) <= 400'000; ++n) {
            inner += static_cast<double>(t.aK[n * m1]) * t.aK[n * m2] * std::pow(n, -4.0 / 3.0);
          }
          num += outer * inner;
        }
      }
    }
    const double ratio = num / (direct * 6 * pi * pi);
    CHECK(small.value / c1.value == doctest::Approx(ratio).epsilon(0.03));
  }
}

TEST_CASE("mean square of R_K") {
  for (const char* name : {"cubic-nonnormal-2", "cubic-cyclic-7"}) {
    const auto& f = fixture(name);
    const auto rep = meansquare_R(f.field, f.tables, f.rho, 1, 10'000, 33, {}, 1'000'000, 0.1);
    double ref = 0.0;
    for (double k = 10'000; k < 20'000; k += 1.0) {
      ref += cell_square(static_cast<double>(partial_A(f.tables, k)), f.rho.value, k, k + 1);
    }
    CHECK(rep.integral_R2 == doctest::Approx(ref).epsilon(1e-10));
    CHECK(rep.main_term == rep.cX.value * 0.6 * (std::pow(20'000.0, 5.0 / 3.0) - std::pow(10'000.0, 5.0 / 3.0)));
    CHECK(rep.ratio == rep.integral_R2 / rep.main_term);
    CHECK(rep.samples == 33);
    const auto rep2 = meansquare_R(f.field, f.tables, f.rho, 1, 10'000, 66, {}, 1'000'000, 0.1);
    CHECK(std::fabs(rep2.integral_R2 - rep.integral_R2) <= rep.quadrature_error_est);
    const auto rep5 = meansquare_R(f.field, f.tables, f.rho, 5, 1000.5, 40, {}, 1'000'000, 0.1);
    double ref5 = 0.0;
    ref5 += cell_square(static_cast<double>(S_K_reduced(f.tables, 5, 1000.5).value), f.rho.value, 1000.5, 1001);
    for (double k = 1001; k < 2001; k += 1.0) {
      ref5 += cell_square(static_cast<double>(S_K_reduced(f.tables, 5, k).value), f.rho.value, k, k + 1);
    }
    CHECK(rep5.integral_R2 == doctest::Approx(ref5).epsilon(1e-10));
    CHECK_THROWS_AS(meansquare_R(f.field, f.tables, f.rho, 5, 49, 33), PreconditionError);
    CHECK_THROWS_AS(meansquare_R(f.field, f.tables, f.rho, 5, 1000, 32), PreconditionError);
    CHECK_THROWS_AS(meansquare_R(f.field, f.tables, f.rho, 5, 300'000, 33), PreconditionError);
  }
  const auto& f = fixture("cubic-nonnormal-2");
  const auto trend = meansquare_trend(f.field, f.tables, f.rho, 5, {1000, 10'000}, 33, {}, 1'000'000, 0.1);
  CHECK(trend.rows.size() == 2);
  CHECK(trend.ratio_steps.size() == 1);
}

TEST_CASE("classical S1") {
  for (double Y : {0.5, 1.0, 77.7, 1e6}) CHECK(classical_S1(1, Y).value == static_cast<std::int64_t>(std::floor(Y)));
  // naive double sum from the exponential-sum definition, for all X, Y <= 200
  const int L = 200;
  std::vector<std::vector<std::int64_t>> pre(L + 1, std::vector<std::int64_t>(L + 1, 0));
  for (int m = 1; m <= L; ++m) {
    for (int n = 1; n <= L; ++n) {
      const auto c = std::llround(oracle::ramanujan_exponential(m, n).real());
      pre[m][n] = c + pre[m - 1][n] + pre[m][n - 1] - pre[m - 1][n - 1];
    }
  }
  for (int X = 1; X <= L; ++X) {
    for (int Y = 1; Y <= L; ++Y) REQUIRE(classical_S1(X, Y).value == pre[X][Y]);
  }
  const auto s = classical_S1(100, 5000);
  CHECK(s.main_small_Y == doctest::Approx(-3.0 * 1e4 / (2 * pi * pi)));
  CHECK(s.main_large_Y == 5000);
  CHECK_THROWS_AS(classical_S1(10'001, 10), PreconditionError);
  CHECK_THROWS_AS(classical_S1(10, 1.1e7), PreconditionError);
}

TEST_CASE("Theorem 1 ratio is finite and positive") {
  const auto& f = fixture("cubic-nonnormal-2");
  for (double X : {5.0, 8.0, 10.0}) {
    const double r = theorem1_ratio(f.tables, f.rho, X, 10 * X * X * X);
    CHECK(std::isfinite(r));
    CHECK(r >= 0.0);
  }
}

TEST_CASE("exponential sum probe") {
  const auto p = lemma4_probe(2, 3, 5, 10.0, 0.5, 1.0, 1.0);
  // direct evaluation with unit coefficients
  std::complex<double> s0 = 0;
  double s1 = 0;
  for (int h = 3; h <= 4; ++h) {
    for (int n = 4; n <= 6; ++n) {
      std::complex<double> inner = 0;
      double best = 0;
      for (int m = 6; m <= 10; ++m) {
        inner += std::polar(1.0, 2 * pi * 10.0 * (h / 2.0) * (n / 3.0) * std::sqrt(m / 5.0));
        best = std::max(best, std::abs(inner));
      }
      s0 += inner;
      s1 += best;
    }
  }
  CHECK(p.S0 == doctest::Approx(std::abs(s0)).epsilon(1e-10));
  CHECK(p.S1 == doctest::Approx(s1).epsilon(1e-10));
  CHECK(p.ratio0 == doctest::Approx(p.S0 / p.bound0));
  std::mt19937_64 a(5), b(5);
  CHECK(lemma4_probe(4, 4, 16, 100.0, 0.5, 1.0, 1.0, &a).S0 == lemma4_probe(4, 4, 16, 100.0, 0.5, 1.0, 1.0, &b).S0);
  CHECK_THROWS_AS(lemma4_probe(1, 1, 1, 10.0, 1.0, 1.0, 1.0), PreconditionError);
}
