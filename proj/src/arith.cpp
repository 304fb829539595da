#include "cubic/arith.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

namespace cubic {
namespace {

constexpr std::size_t kSegment = 1U << 15;

std::int32_t narrow_i32(std::int64_t v, const char* what, std::uint64_t n) {
  if (v > std::numeric_limits<std::int32_t>::max() || v < std::numeric_limits<std::int32_t>::min()) {
    throw OverflowError(std::string("32-bit overflow in ") + what + " at n=" + std::to_string(n));
  }
  return static_cast<std::int32_t>(v);
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

struct LocalFactors {
  std::uint32_t p = 0;
  std::vector<std::int64_t> a, mu, b;
};

LocalFactors local_factors(const FieldSpec& field, std::uint32_t p, std::uint64_t N) {
  unsigned kmax = 0;
  for (std::uint64_t pk = p; pk <= N; pk *= p) ++kmax;
  LocalFactors lf;
  lf.p = p;
  lf.a = local_aK(field, p, kmax);
  lf.mu = local_muK(lf.a);
  lf.b.resize(lf.a.size());
  lf.b[0] = 1;
  for (std::size_t k = 1; k < lf.a.size(); ++k) lf.b[k] = lf.a[k] - lf.a[k - 1];
  return lf;
}

template <typename T>
void put_le(std::ostream& out, T v) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(v);
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>(u & 0xFFU);
    u = static_cast<U>(u >> 8U);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  using U = std::make_unsigned_t<T>;
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw TableFormatError("table file truncated");
  U u = 0;
  for (std::size_t i = sizeof(T); i-- > 0;) u = static_cast<U>((u << 8U) | bytes[i]);
  return static_cast<T>(u);
}

constexpr char kMagic[8] = {'C', 'U', 'B', 'I', 'C', 'T', 'B', 'L'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

ArithTables build_tables(const FieldSpec& field, std::uint64_t N, Parallelism par) {
  if (N < 1 || N > kMaxTableN) {
    throw PreconditionError("table size N=" + std::to_string(N) + " outside [1, 10^8] (about " +
                            std::to_string(ArithTables::kBytesPerEntry) + " bytes per entry)");
  }
  ArithTables t;
  t.field_name = field.name;
  t.N = N;
  t.aK.assign(N + 1, 0);
  t.muK.assign(N + 1, 0);
  t.b.assign(N + 1, 0);

  const std::uint64_t root = isqrt(N);
  std::vector<LocalFactors> small;
  for (std::uint32_t p : primes_up_to(root)) small.push_back(local_factors(field, p, N));

  // a_K(q) for the primes above sqrt(N); they occur to the first power only.
  std::vector<std::uint8_t> large_a(N + 1, 0);
  {
    const auto primes = primes_up_to(N);
    const std::size_t blocks = (primes.size() + kSegment - 1) / kSegment;
    parallel_blocks(blocks, par, [&](std::size_t blk) {
      const std::size_t end = std::min(primes.size(), (blk + 1) * kSegment);
      for (std::size_t i = blk * kSegment; i < end; ++i) {
        if (primes[i] > root) large_a[primes[i]] = static_cast<std::uint8_t>(degree_one_primes(field, primes[i]));
      }
    });
  }

  const std::size_t blocks = (N + kSegment) / kSegment;  // covers 0..N
  parallel_blocks(blocks, par, [&](std::size_t blk) {
    const std::uint64_t lo = std::max<std::uint64_t>(1, blk * kSegment);
    const std::uint64_t hi = std::min<std::uint64_t>(N, (blk + 1) * kSegment - 1);
    if (lo > hi) return;
    const std::size_t len = hi - lo + 1;
    std::vector<std::uint64_t> rem(len);
    std::vector<std::int64_t> va(len, 1), vmu(len, 1), vb(len, 1);
    for (std::size_t i = 0; i < len; ++i) rem[i] = lo + i;
    for (const auto& lf : small) {
      const std::uint64_t p = lf.p;
      for (std::uint64_t n = (lo + p - 1) / p * p; n <= hi; n += p) {
        const std::size_t i = n - lo;
        std::uint64_t r = rem[i];
        unsigned k = 0;
        while (r % p == 0) {
          r /= p;
          ++k;
        }
        rem[i] = r;
        va[i] *= lf.a[k];
        vmu[i] *= lf.mu[k];
        vb[i] *= lf.b[k];
      }
    }
    for (std::size_t i = 0; i < len; ++i) {
      if (rem[i] > 1) {
        const std::int64_t a = large_a[rem[i]];
        va[i] *= a;
        vmu[i] *= -a;
        vb[i] *= a - 1;
      }
      const std::uint64_t n = lo + i;
      t.aK[n] = narrow_i32(va[i], "a_K", n);
      t.muK[n] = narrow_i32(vmu[i], "mu_K", n);
      t.b[n] = narrow_i32(vb[i], "b", n);
    }
  });
  rebuild_prefix_sums(t);
  return t;
}

void rebuild_prefix_sums(ArithTables& tables) {
  const std::uint64_t N = tables.N;
  if (tables.aK.size() != N + 1 || tables.muK.size() != N + 1 || tables.b.size() != N + 1) {
    throw PreconditionError("table arrays do not match N");
  }
  tables.A_prefix.assign(N + 1, 0);
  tables.M_prefix.assign(N + 1, 0);
  i128 a = 0;
  i128 m = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    a += tables.aK[n];
    m += tables.muK[n];
    tables.A_prefix[n] = narrow_i64(a, "A_K prefix sum");
    tables.M_prefix[n] = narrow_i64(m, "M_K prefix sum");
  }
}

namespace {

std::uint64_t table_index(const ArithTables& tables, double x, const char* what) {
  if (!(x >= 0.0)) throw PreconditionError(std::string(what) + ": negative or NaN argument");
  if (x < 1.0) return 0;
  const double n = std::floor(x);
  if (n > static_cast<double>(tables.N)) {
    throw PreconditionError(std::string(what) + "(" + std::to_string(x) + ") exceeds table N=" +
                            std::to_string(tables.N));
  }
  return static_cast<std::uint64_t>(n);
}

}  // namespace

std::int64_t partial_A(const ArithTables& tables, double x) { return tables.A_prefix[table_index(tables, x, "A_K")]; }

std::int64_t partial_M(const ArithTables& tables, double x) { return tables.M_prefix[table_index(tables, x, "M_K")]; }

namespace {

std::uint64_t quotient_index(const ArithTables& tables, double y, std::uint64_t m, const char* what) {
  const std::uint64_t q = floor_div(y, m);
  if (q > tables.N) {
    throw PreconditionError(std::string(what) + "(" + std::to_string(y) + "/" + std::to_string(m) +
                            ") exceeds table N=" + std::to_string(tables.N));
  }
  return q;
}

}  // namespace

std::int64_t partial_A_quot(const ArithTables& tables, double y, std::uint64_t m) {
  return tables.A_prefix[quotient_index(tables, y, m, "A_K")];
}

std::int64_t partial_M_quot(const ArithTables& tables, double y, std::uint64_t m) {
  return tables.M_prefix[quotient_index(tables, y, m, "M_K")];
}

std::string to_string(RhoMethod method) {
  return method == RhoMethod::series_b_over_m ? "series_b_over_m" : "regression_on_A";
}

RhoMethod parse_rho_method(std::string_view text) {
  if (text == "series_b_over_m" || text == "series") return RhoMethod::series_b_over_m;
  if (text == "regression_on_A" || text == "regression") return RhoMethod::regression_on_A;
  throw ConfigError("unknown rho method '" + std::string(text) + "'");
}

double error_P(const ArithTables& tables, const RhoEstimate& rho, double x) {
  return static_cast<double>(partial_A(tables, x)) - rho.value * x;
}

RhoEstimate estimate_rho(const ArithTables& tables, std::uint64_t B, RhoMethod method) {
  if (B < 1000) throw PreconditionError("rho cutoff B=" + std::to_string(B) + " below 10^3");
  if (B > tables.N) throw PreconditionError("rho cutoff B=" + std::to_string(B) + " exceeds table N");
  RhoEstimate est;
  est.method = method;
  est.B = B;
  // Welford mean/variance of the sampled quantities
  double mean = 0.0;
  double m2 = 0.0;
  std::uint64_t count = 0;
  auto observe = [&](double v) {
    ++count;
    const double delta = v - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (v - mean);
  };
  if (method == RhoMethod::series_b_over_m) {
    NeumaierSum s;
    const std::uint64_t window_start = (B + 1) / 2;
    for (std::uint64_t m = 1; m <= B; ++m) {
      s.add(static_cast<double>(tables.b[m]) / static_cast<double>(m));
      if (m >= window_start) observe(s.value());
    }
    est.value = mean;
  } else {
    std::vector<std::uint64_t> xs;
    const double start = static_cast<double>(B) / 8.0;
    for (int i = 0; i <= 96; ++i) {
      const auto x = static_cast<std::uint64_t>(std::floor(start * std::exp2(i / 32.0)));
      if (x >= 1 && x <= B && (xs.empty() || xs.back() != x)) xs.push_back(x);
    }
    NeumaierSum num;
    NeumaierSum den;
    for (std::uint64_t x : xs) {
      const auto xd = static_cast<double>(x);
      num.add(static_cast<double>(tables.A_prefix[x]) * xd);
      den.add(xd * xd);
      observe(static_cast<double>(tables.A_prefix[x]) / xd);
    }
    est.value = num.value() / den.value();
  }
  est.std_error = count > 1 ? std::sqrt(std::max(0.0, m2 / static_cast<double>(count - 1))) : 0.0;
  return est;
}

RhoCrossCheck cross_check_rho(const ArithTables& tables, std::uint64_t B) {
  RhoCrossCheck c;
  c.series = estimate_rho(tables, B, RhoMethod::series_b_over_m);
  c.regression = estimate_rho(tables, B, RhoMethod::regression_on_A);
  c.combined_std_error = std::hypot(c.series.std_error, c.regression.std_error);
  const double diff = std::fabs(c.series.value - c.regression.value);
  if (diff > 3.0 * c.combined_std_error + 1e-15 * std::fabs(c.series.value)) {
    throw RhoDisagreement("rho estimators disagree: series " + std::to_string(c.series.value) + " vs regression " +
                          std::to_string(c.regression.value) + " (combined stderr " +
                          std::to_string(c.combined_std_error) + ")");
  }
  return c;
}

RhoEstimate checked_rho(const ArithTables& tables, std::uint64_t B, RhoMethod method) {
  const auto c = cross_check_rho(tables, B);
  return method == RhoMethod::series_b_over_m ? c.series : c.regression;
}

std::int64_t classical_ramanujan(std::uint64_t m, std::uint64_t n) {
  if (m == 0 || n == 0) throw PreconditionError("classical_ramanujan needs m, n >= 1");
  const std::uint64_t g = gcd_u64(m, n);
  std::int64_t sum = 0;
  for (std::uint64_t d = 1; d * d <= g; ++d) {
    if (g % d != 0) continue;
    sum += static_cast<std::int64_t>(d) * mobius(m / d);
    if (d * d != g) sum += static_cast<std::int64_t>(g / d) * mobius(m / (g / d));
  }
  return sum;
}

std::vector<std::uint64_t> tau_l_table(unsigned l, std::uint64_t limit) {
  if (l < 1) throw PreconditionError("tau_l needs l >= 1");
  if (limit > kMaxTableN) throw PreconditionError("tau_l table limit above 10^8");
  std::vector<std::uint64_t> tau(limit + 1, 1);
  tau[0] = 0;
  std::vector<std::uint64_t> rem(limit + 1);
  for (std::uint64_t n = 0; n <= limit; ++n) rem[n] = n;
  std::array<std::uint64_t, 64> local{};
  for (unsigned k = 0; k < local.size(); ++k) local[k] = binomial(k + l - 1, l - 1);
  for (std::uint32_t p : primes_up_to(limit)) {
    for (std::uint64_t n = p; n <= limit; n += p) {
      unsigned k = 0;
      while (rem[n] % p == 0) {
        rem[n] /= p;
        ++k;
      }
      tau[n] *= local[k];
    }
  }
  return tau;
}

std::uint64_t tau_power_sum(unsigned l, unsigned q, std::uint64_t x) {
  if (l < 2 || q < 1) throw PreconditionError("tau_power_sum needs l >= 2 and q >= 1");
  const auto tau = tau_l_table(l, x);
  u128 sum = 0;
  const u128 cap = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t n = 1; n <= x; ++n) {
    u128 v = 1;
    for (unsigned i = 0; i < q; ++i) {
      v *= tau[n];
      if (v > cap) throw OverflowError("tau_power_sum term overflow");
    }
    sum += v;
    if (sum > cap) throw OverflowError("tau_power_sum overflow");
  }
  return static_cast<std::uint64_t>(sum);
}

double lemma7_sum(std::uint64_t T, Parallelism par) {
  if (T < 2 || T > 100'000) throw PreconditionError("lemma7_sum needs 2 <= T <= 10^5");
  const auto tau4 = tau_l_table(4, T);
  std::vector<double> w(T + 1), c(T + 1), c2(T + 1);
  for (std::uint64_t n = 1; n <= T; ++n) {
    const auto t = static_cast<double>(tau4[n]);
    c[n] = std::cbrt(static_cast<double>(n));
    c2[n] = c[n] * c[n];
    w[n] = t * t / c2[n];
  }
  // n^{1/3} - m^{1/3} = (n - m) / (n^{2/3} + (mn)^{1/3} + m^{2/3}) avoids cancellation
  std::vector<double> rows(T + 1, 0.0);
  constexpr std::size_t kRows = 64;
  parallel_blocks((T + kRows - 1) / kRows, par, [&](std::size_t blk) {
    for (std::uint64_t m = 1 + blk * kRows; m <= std::min<std::uint64_t>(T, (blk + 1) * kRows); ++m) {
      double s = 0.0;
      const double cm = c[m];
      const double c2m = c2[m];
      for (std::uint64_t n = m + 1; n <= T; ++n) {
        s += w[n] * (c2[n] + c[n] * cm + c2m) / static_cast<double>(n - m);
      }
      rows[m] = w[m] * s;
    }
  });
  NeumaierSum total;
  for (std::uint64_t m = 1; m <= T; ++m) total.add(rows[m]);
  return 2.0 * total.value();
}

void write_table(const ArithTables& tables, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open table file for writing: " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(tables.field_name.size()));
  out.write(tables.field_name.data(), static_cast<std::streamsize>(tables.field_name.size()));
  put_le<std::uint64_t>(out, tables.N);
  for (const auto* arr : {&tables.aK, &tables.muK, &tables.b}) {
    for (std::uint64_t n = 1; n <= tables.N; ++n) put_le<std::int64_t>(out, (*arr)[n]);
  }
  if (!out) throw std::runtime_error("failed writing table file: " + path.string());
}

ArithTables read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TableFormatError("cannot open table file: " + path.string());
  char magic[sizeof(kMagic)] = {};
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(std::begin(magic), std::end(magic), std::begin(kMagic))) {
    throw TableFormatError("not a table file (bad magic): " + path.string());
  }
  if (const auto v = get_le<std::uint32_t>(in); v != kVersion) {
    throw TableFormatError("unsupported table version " + std::to_string(v));
  }
  const auto name_len = get_le<std::uint32_t>(in);
  if (name_len > 4096) throw TableFormatError("table field name too long");
  ArithTables t;
  t.field_name.resize(name_len);
  in.read(t.field_name.data(), name_len);
  t.N = get_le<std::uint64_t>(in);
  if (t.N < 1 || t.N > kMaxTableN) throw TableFormatError("table N out of range");
  for (auto* arr : {&t.aK, &t.muK, &t.b}) {
    arr->assign(t.N + 1, 0);
    for (std::uint64_t n = 1; n <= t.N; ++n) (*arr)[n] = narrow_i32(get_le<std::int64_t>(in), "table entry", n);
  }
  if (in.peek() != std::char_traits<char>::eof()) throw TableFormatError("trailing bytes in table file");
  rebuild_prefix_sums(t);
  return t;
}

void write_table_csv(const ArithTables& tables, std::ostream& out, std::uint64_t limit) {
  out << "n,aK,muK,b,A,M\n";
  for (std::uint64_t n = 1; n <= std::min(tables.N, limit); ++n) {
    out << n << ',' << tables.aK[n] << ',' << tables.muK[n] << ',' << tables.b[n] << ',' << tables.A_prefix[n] << ','
        << tables.M_prefix[n] << '\n';
  }
}

}  // namespace cubic
