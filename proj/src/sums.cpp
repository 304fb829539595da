#include "cubic/sums.hpp"

#include "cubic/ideals.hpp"
#include "cubic/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

namespace cubic {
namespace {

using std::numbers::pi;

void require_table(const ArithTables& tables, double v, const char* what) {
  if (!(v >= 0.0)) throw PreconditionError(std::string(what) + " must be non-negative");
  if (v >= static_cast<double>(tables.N) + 1.0) {
    throw PreconditionError(std::string(what) + "=" + std::to_string(v) + " exceeds table N=" + std::to_string(tables.N));
  }
}

std::uint64_t floor_u64(double v) { return v < 1.0 ? 0 : static_cast<std::uint64_t>(std::floor(v)); }

/// Precomputed truncated Voronoi sum for fixed (field, y).
class VoronoiKernel {
 public:
  VoronoiKernel(const FieldSpec& field, const ArithTables& tables, double y, VoronoiNormalization norm) {
    double D = 1.0;
    phase_ = 0.0;
    if (norm == VoronoiNormalization::field_scaled) {
      D = field.abs_disc();
      phase_ = field.totally_real() ? 0.0 : -pi / 2.0;
    }
    scale_ = std::pow(D, 1.0 / 6.0) / (std::sqrt(3.0) * pi);
    const std::uint64_t n_max = floor_u64(y);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      if (tables.aK[n] == 0) continue;
      const auto nd = static_cast<double>(n);
      weight_.push_back(tables.aK[n] * std::pow(nd, -2.0 / 3.0));
      freq_.push_back(6.0 * pi * std::cbrt(nd / D));
    }
  }

  [[nodiscard]] double operator()(double Y) const {
    const double cy = std::cbrt(Y);
    NeumaierSum s;
    for (std::size_t i = 0; i < weight_.size(); ++i) s.add(weight_[i] * std::cos(freq_[i] * cy + phase_));
    return scale_ * cy * s.value();
  }

 private:
  double scale_ = 0.0;
  double phase_ = 0.0;
  std::vector<double> weight_;
  std::vector<double> freq_;
};

void check_voronoi_range(const ArithTables& tables, double Y, double y) {
  if (!(y >= 1.0) || !(y <= Y)) throw PreconditionError("voronoi: need 1 <= y <= Y");
  require_table(tables, Y, "Y");
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Least-squares slope of ys against xs.
double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

/// Integer breakpoints partition [lo, hi] into cells inside unit intervals.
std::vector<double> unit_breakpoints(double lo, double hi) {
  std::vector<double> pts{lo};
  for (double k = std::floor(lo) + 1.0; k < hi; k += 1.0) pts.push_back(k);
  pts.push_back(hi);
  return pts;
}

// Euler factor sum_k a(p^{k+v}) a(p^k) p^{-4k/3}.
double euler_factor(const std::vector<std::int64_t>& a, unsigned v, double p, unsigned K) {
  double s = 0.0;
  double pw = 1.0;
  const double step = std::pow(p, -4.0 / 3.0);
  for (unsigned k = 0; k <= K; ++k) {
    s += static_cast<double>(a[k + v]) * static_cast<double>(a[k]) * pw;
    pw *= step;
  }
  return s;
}

unsigned euler_terms(double p) { return static_cast<unsigned>(std::ceil(60.0 / (4.0 / 3.0 * std::log(p)))) + 4; }

/// sum_{p > P} p^{-sigma} <= 1.25506 sigma P^{1-sigma} / ((sigma - 1) log P).
double prime_tail(double P, double sigma) {
  return 1.25506 * sigma * std::pow(P, 1.0 - sigma) / ((sigma - 1.0) * std::log(P));
}

// log prod_{p <= P} E_p(0, 0), memoized per field and cutoff.
double log_square_product(const FieldSpec& field, std::uint64_t P) {
  static std::mutex mutex;
  static std::map<std::string, double> cache;
  std::string key = field.name + "|" + std::to_string(field.degree) + "|" + field.poly.to_string() + "|" +
                    field.disc.str() + "|" + std::to_string(P);
  for (const auto& [p, split] : field.index_divisor_overrides) key += "|" + std::to_string(p) + split.encoded();
  {
    std::lock_guard lock(mutex);
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
  }
  NeumaierSum log_z;
  for (std::uint32_t p : primes_up_to(P)) {
    const auto pd = static_cast<double>(p);
    const unsigned K = euler_terms(pd);
    const auto a = local_aK(field, p, K);
    log_z.add(std::log(euler_factor(a, 0, pd, K)));
  }
  std::lock_guard lock(mutex);
  cache[key] = log_z.value();
  return log_z.value();
}

}  // namespace

SumResult S_K_direct(const FieldSpec& field, const ArithTables& tables, double X, double Y) {
  if (!(X >= 0.0) || X > 1000.0) throw PreconditionError("S_K_direct: X must lie in [0, 10^3]");
  require_table(tables, Y, "Y");
  SumResult r;
  r.X = X;
  r.Y = Y;
  r.path = SumPath::direct_ideal;
  i128 total = 0;
  for (const auto& J : enumerate_ideals(field, floor_u64(X))) total += sum_cJ_over_I(tables, J, Y);
  r.value = narrow_i64(total, "S_K_direct");
  return r;
}

SumResult S_K_reduced(const ArithTables& tables, double X, double Y, const std::optional<RhoEstimate>& rho) {
  require_table(tables, X, "X");
  require_table(tables, Y, "Y");
  SumResult r;
  r.X = X;
  r.Y = Y;
  r.path = SumPath::reduced;
  r.rho_used = rho;
  i128 total = 0;
  NeumaierSum rem;
  const std::uint64_t m_max = floor_u64(X);
  for (std::uint64_t m = 1; m <= m_max; ++m) {
    const std::int64_t a = tables.aK[m];
    if (a == 0) continue;
    const std::int64_t M = partial_M_quot(tables, X, m);
    if (M == 0) continue;
    const std::int64_t A = partial_A_quot(tables, Y, m);
    total += static_cast<i128>(m) * a * M * A;
    if (rho) {
      const double P = static_cast<double>(A) - rho->value * Y / static_cast<double>(m);
      rem.add(static_cast<double>(m) * static_cast<double>(a) * static_cast<double>(M) * P);
    }
  }
  r.value = narrow_i64(total, "S_K_reduced");
  if (rho) r.remainder = rem.value();
  return r;
}

double remainder_R(const ArithTables& tables, const RhoEstimate& rho, double X, double Y) {
  return static_cast<double>(S_K_reduced(tables, X, Y).value) - rho.value * Y;
}

VoronoiValue voronoi_P1(const FieldSpec& field, const ArithTables& tables, const RhoEstimate& rho, double Y, double y,
                        VoronoiNormalization norm) {
  check_voronoi_range(tables, Y, y);
  const VoronoiKernel kernel(field, tables, y, norm);
  VoronoiValue v;
  v.P_K = error_P(tables, rho, Y);
  v.P1 = kernel(Y);
  v.P2 = v.P_K - v.P1;
  return v;
}

TruncationScan voronoi_truncation_scan(const FieldSpec& field, const ArithTables& tables, const RhoEstimate& rho,
                                       double Y_lo, double Y_hi, std::size_t count, const std::vector<double>& ys,
                                       VoronoiNormalization norm, Parallelism par) {
  if (count == 0 || ys.empty()) throw PreconditionError("truncation scan needs samples and truncation points");
  if (!(Y_lo < Y_hi)) throw PreconditionError("truncation scan needs Y_lo < Y_hi");
  TruncationScan scan;
  scan.ys = ys;
  scan.sample_count = count;
  std::vector<double> Ys(count);
  for (std::size_t i = 0; i < count; ++i) {
    Ys[i] = Y_lo + (static_cast<double>(i) + 0.5) * (Y_hi - Y_lo) / static_cast<double>(count);
    check_voronoi_range(tables, Ys[i], *std::max_element(ys.begin(), ys.end()));
  }
  std::vector<double> lx, ly;
  for (double y : ys) {
    const VoronoiKernel kernel(field, tables, y, norm);
    std::vector<double> abs_p2(count);
    parallel_blocks(count, par, [&](std::size_t i) {
      abs_p2[i] = std::fabs(error_P(tables, rho, Ys[i]) - kernel(Ys[i]));
    });
    const double med = median(abs_p2);
    scan.median_abs_P2.push_back(med);
    lx.push_back(std::log(y));
    ly.push_back(std::log(med));
  }
  scan.fitted_exponent = ys.size() > 1 ? slope(lx, ly) : 0.0;
  return scan;
}

double meansquare_P2(const FieldSpec& field, const ArithTables& tables, const RhoEstimate& rho, double T, double y,
                     VoronoiNormalization norm, Parallelism par) {
  if (!(T >= 1.0)) throw PreconditionError("meansquare_P2: T must be >= 1");
  if (!(y >= 1.0) || y > std::cbrt(T) * (1.0 + 1e-12)) throw PreconditionError("meansquare_P2: need 1 <= y <= T^{1/3}");
  require_table(tables, 2.0 * T, "2T");
  const VoronoiKernel kernel(field, tables, y, norm);
  const auto pts = unit_breakpoints(T, 2.0 * T);
  const std::size_t cells = pts.size() - 1;
  // 4-point Gauss-Legendre on [-1, 1]
  constexpr double x1 = 0.33998104358485626, x2 = 0.86113631159405258;
  constexpr double w1 = 0.65214515486254614, w2 = 0.34785484513745386;
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (cells + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  parallel_blocks(blocks, par, [&](std::size_t blk) {
    NeumaierSum s;
    for (std::size_t c = blk * kBlock; c < std::min(cells, (blk + 1) * kBlock); ++c) {
      const double a = pts[c];
      const double b = pts[c + 1];
      const double A = static_cast<double>(partial_A(tables, 0.5 * (a + b)));
      const double mid = 0.5 * (a + b);
      const double half = 0.5 * (b - a);
      auto f = [&](double Y) {
        const double p2 = A - rho.value * Y - kernel(Y);
        return p2 * p2;
      };
      s.add(half * (w1 * (f(mid - half * x1) + f(mid + half * x1)) + w2 * (f(mid - half * x2) + f(mid + half * x2))));
    }
    partial[blk] = s.value();
  });
  NeumaierSum total;
  for (double v : partial) total.add(v);
  return total.value();
}

CXResult compute_cX(const FieldSpec& field, const ArithTables& tables, double X, std::uint64_t prime_cutoff,
                    double tolerance) {
  if (!(X >= 1.0) || X > 1000.0) throw PreconditionError("compute_cX: X must lie in [1, 10^3]");
  require_table(tables, X, "X");
  const std::uint64_t Xi = floor_u64(X);
  if (prime_cutoff < std::max<std::uint64_t>(Xi, 2)) {
    throw PreconditionError("compute_cX: prime cutoff must be at least max(X, 2)");
  }
  CXResult out;
  out.X = X;
  out.prime_cutoff = prime_cutoff;

  // Omitted primes: a(p^k) <= C(k+2, 2), so log of the missing factor is at most beta.
  const auto P = static_cast<double>(prime_cutoff);
  double beta = 0.0;
  for (unsigned k = 1; k <= 80; ++k) {
    const double c = static_cast<double>(binomial(k + 2, 2));
    beta += c * c * prime_tail(P, 4.0 * k / 3.0);
  }
  out.relative_tail = std::expm1(beta);
  if (out.relative_tail > tolerance) {
    throw PreconditionError("compute_cX: relative tail bound " + std::to_string(out.relative_tail) +
                            " exceeds tolerance " + std::to_string(tolerance) + " at prime cutoff " +
                            std::to_string(prime_cutoff));
  }

  // h(m) = prod_{p^v || m} E_p(v, 0) / E_p(0, 0)
  std::vector<double> h(Xi + 1, 1.0);
  for (std::uint32_t p : primes_up_to(Xi)) {
    const auto pd = static_cast<double>(p);
    unsigned vmax = 0;
    for (std::uint64_t pk = p; pk <= Xi; pk *= p) ++vmax;
    const unsigned K = euler_terms(pd);
    const auto a = local_aK(field, p, K + vmax);
    const double e0 = euler_factor(a, 0, pd, K);
    std::uint64_t pv = p;
    for (unsigned v = 1; v <= vmax; ++v, pv *= p) {
      const double ratio = euler_factor(a, v, pd, K) / e0;
      for (std::uint64_t m = pv; m <= Xi; m += pv) {
        if ((m / pv) % p != 0) h[m] *= ratio;
      }
    }
  }

  NeumaierSum K;
  std::vector<double> u;
  std::vector<std::uint64_t> idx;
  for (std::uint64_t m = 1; m <= Xi; ++m) {
    const std::uint64_t lim = Xi / m;
    u.clear();
    idx.clear();
    for (std::uint64_t m1 = 1; m1 <= lim; ++m1) {
      const double v = static_cast<double>(tables.aK[m * m1]) *
                       static_cast<double>(partial_M_quot(tables, X, m * m1)) * h[m1];
      if (v != 0.0) {
        u.push_back(v);
        idx.push_back(m1);
      }
    }
    NeumaierSum inner;
    for (std::size_t i = 0; i < u.size(); ++i) {
      for (std::size_t j = 0; j < u.size(); ++j) {
        if (gcd_u64(idx[i], idx[j]) == 1) inner.add(u[i] * u[j]);
      }
    }
    K.add(std::pow(static_cast<double>(m), 4.0 / 3.0) * inner.value());
  }
  const double Z = std::exp(log_square_product(field, prime_cutoff));
  out.value = K.value() * Z / (6.0 * pi * pi);
  out.tail_bound = std::fabs(out.value) * out.relative_tail;
  return out;
}

double meansquare_main_term(double cX, double T) {
  return cX * 0.6 * (std::pow(2.0 * T, 5.0 / 3.0) - std::pow(T, 5.0 / 3.0));
}

MeanSquareReport meansquare_R(const FieldSpec& field, const ArithTables& tables, const RhoEstimate& rho, double X,
                              double T, std::size_t samples, Parallelism par, std::uint64_t cx_cutoff,
                              double cx_tolerance) {
  if (!(X >= 1.0)) throw PreconditionError("meansquare_R: X must be >= 1");
  if (!(T >= 10.0 * X)) throw PreconditionError("meansquare_R: need T >= 10X");
  if (samples < 33) throw PreconditionError("meansquare_R: samples must be >= 33");
  require_table(tables, 2.0 * T, "2T");
  MeanSquareReport rep;
  rep.X = X;
  rep.T = T;
  rep.samples = samples;
  const auto pts = unit_breakpoints(T, 2.0 * T);
  const std::size_t cells = pts.size() - 1;
  const std::size_t panels = std::min(samples, cells);
  std::vector<double> simpson(panels, 0.0), deviation(panels, 0.0), rounding(panels, 0.0);
  parallel_blocks(panels, par, [&](std::size_t panel) {
    const std::size_t c0 = panel * cells / panels;
    const std::size_t c1 = (panel + 1) * cells / panels;
    NeumaierSum s, d, r;
    for (std::size_t c = c0; c < c1; ++c) {
      const double a = pts[c];
      const double b = pts[c + 1];
      const double mid = 0.5 * (a + b);
      const auto S = static_cast<double>(S_K_reduced(tables, X, mid).value);
      const double fa = (S - rho.value * a) * (S - rho.value * a);
      const double fm = (S - rho.value * mid) * (S - rho.value * mid);
      const double fb = (S - rho.value * b) * (S - rho.value * b);
      const double exact = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
      s.add(exact);
      d.add(exact - (b - a) * fm);
      r.add(8.0 * std::numeric_limits<double>::epsilon() * (b - a) * std::max({fa, fm, fb}));
    }
    simpson[panel] = s.value();
    deviation[panel] = d.value();
    rounding[panel] = r.value();
  });
  NeumaierSum total, dev, rnd;
  for (std::size_t i = 0; i < panels; ++i) {
    total.add(simpson[i]);
    dev.add(deviation[i]);
    rnd.add(rounding[i]);
  }
  rep.integral_R2 = total.value();
  rep.quadrature_error_est = std::fabs(dev.value()) + rnd.value() +
                             static_cast<double>(panels) * std::numeric_limits<double>::epsilon() * rep.integral_R2;
  rep.cX = compute_cX(field, tables, X, cx_cutoff, cx_tolerance);
  rep.main_term = meansquare_main_term(rep.cX.value, T);
  rep.ratio = rep.integral_R2 / rep.main_term;
  rep.disc_scaled_ratio = rep.ratio / std::cbrt(field.abs_disc());
  return rep;
}

MeanSquareTrend meansquare_trend(const FieldSpec& field, const ArithTables& tables, const RhoEstimate& rho, double X,
                                 const std::vector<double>& Ts, std::size_t samples, Parallelism par,
                                 std::uint64_t cx_cutoff, double cx_tolerance) {
  MeanSquareTrend trend;
  for (double T : Ts) trend.rows.push_back(meansquare_R(field, tables, rho, X, T, samples, par, cx_cutoff, cx_tolerance));
  for (std::size_t i = 1; i < trend.rows.size(); ++i) {
    const double d = trend.rows[i].ratio - trend.rows[i - 1].ratio;
    trend.ratio_steps.push_back(d > 0 ? 1 : (d < 0 ? -1 : 0));
  }
  trend.monotone = !trend.ratio_steps.empty() &&
                   (std::all_of(trend.ratio_steps.begin(), trend.ratio_steps.end(), [](int s) { return s >= 0; }) ||
                    std::all_of(trend.ratio_steps.begin(), trend.ratio_steps.end(), [](int s) { return s <= 0; }));
  return trend;
}

ClassicalS1 classical_S1(double X, double Y) {
  if (!(X >= 0.0) || X > 1e4) throw PreconditionError("classical_S1: X must lie in [0, 10^4]");
  if (!(Y >= 0.0) || Y > 1e7) throw PreconditionError("classical_S1: Y must lie in [0, 10^7]");
  const std::uint64_t Xi = floor_u64(X);
  const auto mu = mobius_table(Xi);
  std::vector<std::int64_t> mertens(Xi + 1, 0);
  for (std::uint64_t n = 1; n <= Xi; ++n) mertens[n] = mertens[n - 1] + mu[n];
  i128 total = 0;
  for (std::uint64_t d = 1; d <= Xi; ++d) {
    total += static_cast<i128>(d) * mertens[Xi / d] * static_cast<std::int64_t>(floor_div(Y, d));
  }
  ClassicalS1 out;
  out.value = narrow_i64(total, "classical_S1");
  out.main_large_Y = Y;
  out.main_small_Y = -3.0 * X * X / (2.0 * pi * pi);
  return out;
}

double theorem1_ratio(const ArithTables& tables, const RhoEstimate& rho, double X, double Y) {
  const double R = remainder_R(tables, rho, X, Y);
  return std::fabs(R) / (std::pow(X, 1.6) * std::pow(Y, 0.4) + std::pow(X, 11.0 / 8.0) * std::sqrt(Y));
}

ExpSumProbe lemma4_probe(std::uint64_t H, std::uint64_t N, std::uint64_t M, double U, double alpha, double beta,
                         double gamma, std::mt19937_64* rng) {
  if (H == 0 || N == 0 || M == 0) throw PreconditionError("lemma4_probe: H, N, M must be positive");
  if (!(U > 1.0)) throw PreconditionError("lemma4_probe: U must exceed 1");
  if (alpha * (alpha - 1.0) * beta * gamma == 0.0) throw PreconditionError("lemma4_probe: alpha(alpha-1)beta gamma = 0");
  std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
  auto unit = [&]() -> std::complex<double> { return rng ? std::polar(1.0, angle(*rng)) : std::complex<double>(1.0); };
  std::vector<std::complex<double>> bm(M);
  for (auto& v : bm) v = unit();
  std::vector<double> lm(M);
  for (std::uint64_t i = 0; i < M; ++i) lm[i] = alpha * std::log(static_cast<double>(M + 1 + i) / static_cast<double>(M));
  std::complex<double> S0 = 0.0;
  NeumaierSum S1;
  for (std::uint64_t h = H + 1; h <= 2 * H; ++h) {
    const double lh = beta * std::log(static_cast<double>(h) / static_cast<double>(H));
    for (std::uint64_t n = N + 1; n <= 2 * N; ++n) {
      const double ln = gamma * std::log(static_cast<double>(n) / static_cast<double>(N));
      const std::complex<double> ahn = unit();
      std::complex<double> weighted = 0.0;
      std::complex<double> plain = 0.0;
      double best = 0.0;
      for (std::uint64_t i = 0; i < M; ++i) {
        double x = U * std::exp(lh + ln + lm[i]);
        x -= std::floor(x);
        const std::complex<double> e = std::polar(1.0, 2.0 * pi * x);
        weighted += bm[i] * e;
        plain += e;
        best = std::max(best, std::abs(plain));
      }
      S0 += ahn * weighted;
      S1.add(best);
    }
  }
  ExpSumProbe out;
  const double V = static_cast<double>(H) * static_cast<double>(N) * static_cast<double>(M);
  const double HN = static_cast<double>(H) * static_cast<double>(N);
  const double Md = static_cast<double>(M);
  out.S0 = std::abs(S0);
  out.S1 = S1.value();
  out.bound0 = V * (std::pow(U / (HN * Md * Md), 0.25) + std::pow(HN, -0.25) + 1.0 / std::sqrt(Md) + 1.0 / std::sqrt(U));
  out.bound1 = V * (std::pow(U / (HN * Md * Md), 0.25) + 1.0 / std::sqrt(Md) + 1.0 / U);
  out.ratio0 = out.S0 / out.bound0;
  out.ratio1 = out.S1 / out.bound1;
  return out;
}

}  // namespace cubic
