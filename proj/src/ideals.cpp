#include "cubic/ideals.hpp"

#include "cubic/numtheory.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <ostream>

namespace cubic {
namespace {

std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
  u128 r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    r *= base;
    if (r > std::numeric_limits<std::uint64_t>::max()) throw OverflowError("ideal norm exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

std::uint64_t PrimeIdealLabel::norm() const { return checked_pow(p, f); }

std::string FactoredIdeal::to_string() const {
  if (factors.empty()) return "1";
  std::string out;
  for (const auto& [P, k] : factors) {
    if (!out.empty()) out += "·";
    out += std::to_string(P.p) + "." + std::to_string(P.index);
    if (k > 1) out += "^" + std::to_string(k);
    out += "(" + std::to_string(P.f) + ")";
  }
  return out;
}

std::vector<PrimeIdealLabel> primes_above(const FieldSpec& field, std::uint64_t p) {
  const auto split = splitting_type(field, p);
  std::vector<PrimeIdealLabel> out;
  unsigned index = 0;
  for (const auto& c : split.components()) out.push_back({p, index++, c.residue_degree, c.ramification});
  return out;
}

FactoredIdeal make_ideal(std::vector<std::pair<PrimeIdealLabel, unsigned>> factors) {
  std::map<PrimeIdealLabel, unsigned> merged;
  for (const auto& [P, k] : factors) {
    if (k > 0) merged[P] += k;
  }
  FactoredIdeal I;
  for (const auto& [P, k] : merged) I.factors.emplace_back(P, k);
  return I;
}

std::uint64_t ideal_norm(const FactoredIdeal& I) {
  u128 n = 1;
  for (const auto& [P, k] : I.factors) {
    n *= checked_pow(P.norm(), k);
    if (n > std::numeric_limits<std::uint64_t>::max()) throw OverflowError("ideal norm exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(n);
}

namespace {

// Merges two factor lists, combining exponents present in either.
template <typename Combine>
FactoredIdeal merge(const FactoredIdeal& I, const FactoredIdeal& J, Combine combine) {
  FactoredIdeal out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < I.factors.size() || j < J.factors.size()) {
    PrimeIdealLabel label;
    unsigned a = 0;
    unsigned b = 0;
    if (j == J.factors.size() || (i < I.factors.size() && I.factors[i].first < J.factors[j].first)) {
      label = I.factors[i].first;
      a = I.factors[i++].second;
    } else if (i == I.factors.size() || J.factors[j].first < I.factors[i].first) {
      label = J.factors[j].first;
      b = J.factors[j++].second;
    } else {
      label = I.factors[i].first;
      a = I.factors[i++].second;
      b = J.factors[j++].second;
    }
    if (const unsigned k = combine(a, b); k > 0) out.factors.emplace_back(label, k);
  }
  return out;
}

}  // namespace

FactoredIdeal ideal_gcd(const FactoredIdeal& I, const FactoredIdeal& J) {
  return merge(I, J, [](unsigned a, unsigned b) { return std::min(a, b); });
}

FactoredIdeal ideal_mul(const FactoredIdeal& I, const FactoredIdeal& J) {
  return merge(I, J, [](unsigned a, unsigned b) { return a + b; });
}

bool ideal_divides(const FactoredIdeal& M, const FactoredIdeal& J) { return ideal_gcd(M, J) == M; }

FactoredIdeal ideal_divide(const FactoredIdeal& J, const FactoredIdeal& M) {
  if (!ideal_divides(M, J)) throw PreconditionError("ideal_divide: " + M.to_string() + " does not divide " + J.to_string());
  return merge(J, M, [](unsigned a, unsigned b) { return a - b; });
}

int ideal_mobius(const FactoredIdeal& I) {
  int mu = 1;
  for (const auto& [P, k] : I.factors) {
    (void)P;
    if (k > 1) return 0;
    mu = -mu;
  }
  return mu;
}

std::vector<FactoredIdeal> ideal_divisors(const FactoredIdeal& I) {
  std::vector<FactoredIdeal> out{FactoredIdeal{}};
  for (const auto& [P, k] : I.factors) {
    std::vector<FactoredIdeal> next;
    for (const auto& D : out) {
      for (unsigned j = 0; j <= k; ++j) {
        FactoredIdeal E = D;
        if (j > 0) E.factors.emplace_back(P, j);
        next.push_back(std::move(E));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<FactoredIdeal> enumerate_ideals(const FieldSpec& field, std::uint64_t B) {
  if (B > kMaxEnumerationNorm) throw PreconditionError("enumerate_ideals: B=" + std::to_string(B) + " above 10^6");
  std::vector<FactoredIdeal> out;
  if (B < 1) return out;
  std::vector<PrimeIdealLabel> primes;
  for (std::uint32_t p : primes_up_to(B)) {
    for (const auto& P : primes_above(field, p)) {
      if (P.f == 1 || checked_pow(p, P.f) <= B) primes.push_back(P);
    }
  }
  std::vector<std::uint64_t> norms(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) norms[i] = primes[i].norm();

  FactoredIdeal current;
  // Depth-first over increasing prime-ideal positions.
  auto visit = [&](auto&& self, std::size_t start, std::uint64_t norm) -> void {
    out.push_back(current);
    for (std::size_t i = start; i < primes.size(); ++i) {
      if (norms[i] > B / norm) {
        if (primes[i].f == 1) break;  // degree-one norms increase with i
        continue;
      }
      std::uint64_t n = norm;
      for (unsigned k = 1; norms[i] <= B / n; ++k) {
        n *= norms[i];
        current.factors.emplace_back(primes[i], k);
        self(self, i + 1, n);
        current.factors.pop_back();
      }
    }
  };
  visit(visit, 0, 1);
  std::vector<std::pair<std::uint64_t, std::size_t>> order(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) order[i] = {ideal_norm(out[i]), i};
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return out[a.second] < out[b.second];
  });
  std::vector<FactoredIdeal> sorted;
  sorted.reserve(out.size());
  for (const auto& [n, i] : order) {
    (void)n;
    sorted.push_back(std::move(out[i]));
  }
  return sorted;
}

std::vector<std::int64_t> norm_histogram(const std::vector<FactoredIdeal>& ideals, std::uint64_t B) {
  std::vector<std::int64_t> h(B + 1, 0);
  for (const auto& I : ideals) {
    const std::uint64_t n = ideal_norm(I);
    if (n <= B) ++h[n];
  }
  return h;
}

std::int64_t ramanujan_ideal(const FactoredIdeal& J, const FactoredIdeal& I) {
  // Only M with J/M squarefree contribute: per prime of J the exponent of M
  // is e_J or e_J - 1, and never more than its exponent in I.
  i128 total = 0;
  const std::size_t r = J.factors.size();
  std::vector<unsigned> cap(r);
  for (std::size_t i = 0; i < r; ++i) {
    cap[i] = 0;
    for (const auto& [P, k] : I.factors) {
      if (P == J.factors[i].first) cap[i] = k;
    }
  }
  for (std::uint64_t mask = 0; mask < (1ULL << r); ++mask) {
    // bit set: exponent of M is e_J - 1 (one factor left in J/M)
    i128 norm = 1;
    int sign = 1;
    bool ok = true;
    for (std::size_t i = 0; i < r && ok; ++i) {
      const auto& [P, e] = J.factors[i];
      const unsigned m = (mask >> i & 1U) ? e - 1 : e;
      if (m > cap[i]) ok = false;
      if (mask >> i & 1U) sign = -sign;
      norm *= checked_pow(P.norm(), m);
    }
    if (ok) total += sign * norm;
  }
  return narrow_i64(total, "ramanujan_ideal");
}

std::int64_t sum_cJ_over_I(const ArithTables& tables, const FactoredIdeal& J, double Y) {
  if (!(Y >= 0.0)) throw PreconditionError("sum_cJ_over_I: negative Y");
  if (Y < 1.0) return 0;
  if (Y >= static_cast<double>(tables.N) + 1.0) {
    throw PreconditionError("sum_cJ_over_I: Y=" + std::to_string(Y) + " exceeds table N=" + std::to_string(tables.N));
  }
  const std::size_t r = J.factors.size();
  i128 total = 0;
  for (std::uint64_t mask = 0; mask < (1ULL << r); ++mask) {
    u128 norm = 1;
    int sign = 1;
    for (std::size_t i = 0; i < r; ++i) {
      const auto& [P, e] = J.factors[i];
      const unsigned m = (mask >> i & 1U) ? e - 1 : e;
      if (mask >> i & 1U) sign = -sign;
      norm *= checked_pow(P.norm(), m);
      if (norm > static_cast<u128>(Y)) break;
    }
    if (norm > static_cast<u128>(Y)) continue;
    const auto n = static_cast<std::uint64_t>(norm);
    total += static_cast<i128>(sign) * n * partial_A_quot(tables, Y, n);
  }
  return narrow_i64(total, "sum_cJ_over_I");
}

FactoredIdeal random_ideal(const FieldSpec& field, std::mt19937_64& rng, std::uint64_t max_norm) {
  if (max_norm < 1) throw PreconditionError("random_ideal: max_norm < 1");
  static const std::vector<std::uint32_t> small = primes_up_to(50);
  const auto all = primes_up_to(std::min<std::uint64_t>(max_norm, 100'000));
  FactoredIdeal I;
  if (all.empty()) return I;
  std::uniform_int_distribution<int> factor_count(0, 4);
  std::bernoulli_distribution prefer_small(0.8);
  const int target = factor_count(rng);
  for (int attempt = 0; attempt < 8 * target; ++attempt) {
    if (static_cast<int>(I.factors.size()) >= target) break;
    const auto& pool = (prefer_small(rng) && small.front() <= max_norm) ? small : all;
    const std::uint64_t p = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    if (p > max_norm) continue;
    const auto above = primes_above(field, p);
    const auto& P = above[std::uniform_int_distribution<std::size_t>(0, above.size() - 1)(rng)];
    const unsigned k = std::uniform_int_distribution<unsigned>(1, 3)(rng);
    const auto candidate = ideal_mul(I, make_ideal({{P, k}}));
    const u128 n = [&]() -> u128 {
      try {
        return ideal_norm(candidate);
      } catch (const OverflowError&) {
        return static_cast<u128>(max_norm) + 1;
      }
    }();
    if (n <= max_norm) I = candidate;
  }
  return I;
}

void write_ideals_csv(const std::vector<FactoredIdeal>& ideals, std::ostream& out) {
  out << "norm,factorization\n";
  for (const auto& I : ideals) out << ideal_norm(I) << ',' << I.to_string() << '\n';
}

}  // namespace cubic
