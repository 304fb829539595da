#include "cubic/character.hpp"
#include "cubic/cli.hpp"
#include "cubic/ideals.hpp"
#include "cubic/sums.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace cubic::cli {
namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

Outcome fail(std::string detail) { return {false, std::move(detail)}; }

Outcome convolution_identity(const ArithTables& t) {
  std::vector<std::int64_t> conv(t.N + 1, 0);
  for (std::uint64_t d = 1; d <= t.N; ++d) {
    if (t.aK[d] == 0) continue;
    for (std::uint64_t m = 1, n = d; n <= t.N; ++m, n += d) conv[n] += static_cast<std::int64_t>(t.aK[d]) * t.muK[m];
  }
  for (std::uint64_t n = 1; n <= t.N; ++n) {
    if (conv[n] != (n == 1 ? 1 : 0)) {
      return fail("convolution identity failed at n=" + std::to_string(n) + ": (a_K * mu_K)(n) = " +
                  std::to_string(conv[n]));
    }
  }
  return {true, "n <= " + std::to_string(t.N)};
}

Outcome b_divisor_sum(const ArithTables& t) {
  std::vector<std::int64_t> s(t.N + 1, 0);
  for (std::uint64_t m = 1; m <= t.N; ++m) {
    if (t.b[m] == 0) continue;
    for (std::uint64_t n = m; n <= t.N; n += m) s[n] += t.b[m];
  }
  for (std::uint64_t n = 1; n <= t.N; ++n) {
    if (s[n] != t.aK[n]) {
      return fail("divisor-sum identity failed at n=" + std::to_string(n) + ": sum b = " + std::to_string(s[n]) +
                  ", a_K = " + std::to_string(t.aK[n]));
    }
  }
  return {true, "n <= " + std::to_string(t.N)};
}

Outcome local_factors(const FieldSpec& field, const ArithTables& t) {
  for (std::uint32_t p : primes_up_to(t.N)) {
    unsigned kmax = 0;
    for (std::uint64_t pk = p; pk <= t.N; pk *= p) ++kmax;
    const auto a = local_aK(field, p, kmax);
    const auto mu = local_muK(a);
    std::uint64_t pk = 1;
    for (unsigned k = 1; k <= kmax; ++k) {
      pk *= p;
      if (t.aK[pk] != a[k] || t.muK[pk] != mu[k]) {
        return fail("local factor mismatch at n=" + std::to_string(pk) + " = " + std::to_string(p) + "^" +
                    std::to_string(k));
      }
    }
  }
  return {true, "all prime powers <= " + std::to_string(t.N)};
}

Outcome multiplicativity(const ArithTables& t) {
  const std::uint64_t lim = std::min<std::uint64_t>(t.N, 100'000);
  for (std::uint64_t m = 2; m * 2 <= lim; ++m) {
    for (std::uint64_t n = m + 1; m * n <= lim; ++n) {
      if (gcd_u64(m, n) != 1) continue;
      if (t.aK[m * n] != static_cast<std::int64_t>(t.aK[m]) * t.aK[n]) {
        return fail("multiplicativity failed at m=" + std::to_string(m) + ", n=" + std::to_string(n));
      }
    }
  }
  return {true, "coprime mn <= " + std::to_string(lim)};
}

Outcome cyclic_character(const FieldSpec& field, const ArithTables& t) {
  const auto f = static_cast<std::uint64_t>(field.conductor_f);
  const CubicCharacter chi(f);
  const std::uint64_t lim = std::min<std::uint64_t>(t.N, 10'000);
  const auto conv = chi_times_conj_chi(chi, lim);
  for (std::uint64_t n = 1; n <= lim; ++n) {
    if (!conv[n].is_rational() || conv[n].a != t.b[n]) {
      return fail("b = chi * conj(chi) failed at n=" + std::to_string(n));
    }
  }
  return {true, "conductor " + std::to_string(f) + ", n <= " + std::to_string(lim)};
}

Outcome enumeration(const FieldSpec& field, const ArithTables& t) {
  const std::uint64_t B = std::min<std::uint64_t>(t.N, 10'000);
  const auto h = norm_histogram(enumerate_ideals(field, B), B);
  for (std::uint64_t n = 1; n <= B; ++n) {
    if (h[n] != t.aK[n]) {
      return fail("enumeration histogram differs at n=" + std::to_string(n) + ": " + std::to_string(h[n]) +
                  " ideals vs a_K = " + std::to_string(t.aK[n]));
    }
  }
  return {true, "B = " + std::to_string(B)};
}

Outcome cross_path(const FieldSpec& field, const ArithTables& t) {
  for (double Y : {10.0, 100.0, 1000.0}) {
    if (Y > static_cast<double>(t.N)) continue;
    for (int X = 1; X <= 50; ++X) {
      const auto d = S_K_direct(field, t, X, Y).value;
      const auto r = S_K_reduced(t, X, Y).value;
      if (d != r) {
        return fail("cross-path identity failed at X=" + std::to_string(X) + ", Y=" + std::to_string(Y) +
                    ": direct " + std::to_string(d) + " vs reduced " + std::to_string(r));
      }
    }
  }
  return {true, "X <= 50, Y in {10, 100, 1000}"};
}

Outcome collapse(const FieldSpec& field, const ArithTables& t) {
  const auto Js = enumerate_ideals(field, 50);
  const auto Is = enumerate_ideals(field, std::min<std::uint64_t>(500, t.N));
  for (double Y : {10.0, 100.0, 500.0}) {
    if (Y > static_cast<double>(t.N)) continue;
    for (const auto& J : Js) {
      std::int64_t direct = 0;
      for (const auto& I : Is) {
        if (static_cast<double>(ideal_norm(I)) <= Y) direct += ramanujan_ideal(J, I);
      }
      if (direct != sum_cJ_over_I(t, J, Y)) {
        return fail("collapse identity failed for J=" + J.to_string() + ", Y=" + std::to_string(Y));
      }
    }
  }
  return {true, "N(J) <= 50, Y in {10, 100, 500}"};
}

Outcome random_ideals(const FieldSpec& field, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 200; ++trial) {
    const auto I = random_ideal(field, rng, 1'000'000);
    const auto J = random_ideal(field, rng, 1'000'000);
    const auto g = ideal_gcd(I, J);
    const auto IJ = ideal_mul(I, J);
    if (!ideal_divides(g, I) || !ideal_divides(g, J) || ideal_divide(IJ, J) != I) {
      return fail("ideal arithmetic failed for I=" + I.to_string() + ", J=" + J.to_string());
    }
    if (ideal_norm(IJ) != ideal_norm(I) * ideal_norm(J)) return fail("norm not multiplicative for I=" + I.to_string());
    if (ideal_gcd(I, J).factors.empty() && ideal_mobius(IJ) != ideal_mobius(I) * ideal_mobius(J)) {
      return fail("Moebius not multiplicative for coprime I=" + I.to_string() + ", J=" + J.to_string());
    }
  }
  return {true, "200 random pairs"};
}

Outcome classical_vs_exponential() {
  for (std::uint64_t m = 1; m <= 100; ++m) {
    for (std::uint64_t n = 1; n <= 100; ++n) {
      std::complex<double> s = 0.0;
      for (std::uint64_t j = 1; j <= m; ++j) {
        if (gcd_u64(j, m) == 1) s += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j * n % m) / m);
      }
      const auto c = classical_ramanujan(m, n);
      if (std::llround(s.real()) != c || std::fabs(s.imag()) > 1e-9 || std::fabs(s.real() - c) > 1e-9) {
        return fail("classical Ramanujan sum differs at m=" + std::to_string(m) + ", n=" + std::to_string(n));
      }
    }
  }
  return {true, "m, n <= 100"};
}

Outcome rationals_hook() {
  const auto Q = preset_field("rationals");
  const auto ideals = enumerate_ideals(Q, 100);
  for (const auto& J : ideals) {
    for (const auto& I : ideals) {
      if (ramanujan_ideal(J, I) != classical_ramanujan(ideal_norm(J), ideal_norm(I))) {
        return fail("rationals hook: c_J(I) differs at N(J)=" + std::to_string(ideal_norm(J)) +
                    ", N(I)=" + std::to_string(ideal_norm(I)));
      }
    }
  }
  return {true, "norms <= 100"};
}

Outcome s1_paths() {
  constexpr int L = 200;
  std::vector<std::vector<std::int64_t>> pre(L + 1, std::vector<std::int64_t>(L + 1, 0));
  for (int m = 1; m <= L; ++m) {
    for (int n = 1; n <= L; ++n) {
      pre[m][n] = classical_ramanujan(m, n) + pre[m - 1][n] + pre[m][n - 1] - pre[m - 1][n - 1];
    }
  }
  for (int X = 1; X <= L; ++X) {
    for (int Y = 1; Y <= L; ++Y) {
      if (classical_S1(X, Y).value != pre[X][Y]) {
        return fail("S1 naive/collapsed differ at X=" + std::to_string(X) + ", Y=" + std::to_string(Y));
      }
    }
  }
  return {true, "X, Y <= 200"};
}

std::string report_bounds(const ArithTables& t) {
  const auto tau = divisor_count_table(t.N);
  std::uint64_t tau_violations = 0;
  std::uint64_t mertens_violations = 0;
  double b_growth = 0.0;
  for (std::uint64_t n = 1; n <= t.N; ++n) {
    if (static_cast<std::uint64_t>(t.aK[n]) > static_cast<std::uint64_t>(tau[n]) * tau[n]) ++tau_violations;
    if (static_cast<std::uint64_t>(std::llabs(t.M_prefix[n])) > n) ++mertens_violations;
    b_growth = std::max(b_growth, std::abs(t.b[n]) / std::pow(static_cast<double>(n), 0.1));
  }
  std::ostringstream os;
  os << "a_K <= tau^2 violations " << tau_violations << "; |M_K(x)| <= x violations " << mertens_violations
     << "; max |b(m)|/m^0.1 = " << b_growth;
  return os.str();
}

}  // namespace

std::vector<CheckResult> run_verify(const RunConfig& cfg, std::ostream& log) {
  std::vector<CheckResult> out;
  auto record = [&](const std::string& check, const std::string& field, const Outcome& o) {
    out.push_back({check, field, o.ok ? "pass" : "fail", o.detail});
    log << (o.ok ? "PASS " : "FAIL ") << check << (field.empty() ? "" : " [" + field + "]") << ": " << o.detail << '\n';
  };
  std::vector<std::string> names = cfg.fields;
  if (names.empty() && !cfg.table) names = {"cubic-nonnormal-2", "cubic-cyclic-7"};
  if (names.empty()) names.emplace_back();
  const std::uint64_t N = cfg.N.value_or(kDefaultN);
  for (const auto& name : names) {
    const FieldData fd = prepare_field(cfg, name, N, false);
    const auto& f = fd.field;
    const auto& t = fd.tables;
    record("convolution a_K * mu_K = delta", f.name, convolution_identity(t));
    record("sum_{m|n} b(m) = a_K(n)", f.name, b_divisor_sum(t));
    record("local factors", f.name, local_factors(f, t));
    record("multiplicativity", f.name, multiplicativity(t));
    if (f.normal && !f.is_rationals()) record("b = chi * conj(chi)", f.name, cyclic_character(f, t));
    if (!f.is_rationals()) {
      record("enumeration histogram", f.name, enumeration(f, t));
      record("cross-path S_K", f.name, cross_path(f, t));
      record("collapse identity", f.name, collapse(f, t));
      record("random ideal arithmetic", f.name, random_ideals(f, cfg.seed));
    }
    out.push_back({"bounds", f.name, "report", report_bounds(t)});
    log << "REPORT bounds [" << f.name << "]: " << out.back().detail << '\n';
  }
  record("classical Ramanujan sums", "", classical_vs_exponential());
  record("classical S1 paths", "", s1_paths());
  record("rationals hook", "", rationals_hook());
  return out;
}

}  // namespace cubic::cli
