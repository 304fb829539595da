#pragma once

// Summatory objects over a cubic field: S_K(X, Y) by two exact paths, the
// remainder R_K, the truncated Voronoi expansion of P_K, the coefficient
// c(X) with its rigorous tail, and the mean-square harnesses.

#include "cubic/arith.hpp"
#include "cubic/field.hpp"
#include "cubic/parallel.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace cubic {

enum class SumPath { direct_ideal, reduced };

struct SumResult {
  double X = 0.0;
  double Y = 0.0;
  std::int64_t value = 0;
  SumPath path = SumPath::reduced;
  std::optional<RhoEstimate> rho_used;
  /// With rho: the remainder as sum m a_K(m) M_K(X/m) P_K(Y/m); equals value - rho Y.
  std::optional<double> remainder;
};

/// Sum over N(J) <= X of sum_cJ_over_I(J, Y) by ideal enumeration; X <= 10^3.
SumResult S_K_direct(const FieldSpec& field, const ArithTables& tables, double X, double Y);

/// sum_{m <= X} m a_K(m) M_K(X/m) A_K(Y/m); max(X, Y) <= N.
SumResult S_K_reduced(const ArithTables& tables, double X, double Y,
                      const std::optional<RhoEstimate>& rho = std::nullopt);

/// R_K(X, Y) = S_K(X, Y) - rho Y.
double remainder_R(const ArithTables& tables, const RhoEstimate& rho, double X, double Y);

/// Scaling of the truncated Voronoi sum. field_scaled inserts the |D|
/// dependence and the phase of a field with a complex place; literal is the
/// bare formula with |D| = 1 and zero phase.
enum class VoronoiNormalization { field_scaled, literal };

struct VoronoiValue {
  double P_K = 0.0;
  double P1 = 0.0;
  double P2 = 0.0;
};

/// P1(Y; y) = |D|^{1/6} Y^{1/3} / (sqrt(3) pi) sum_{n<=y} a_K(n) n^{-2/3}
/// cos(6 pi (nY/|D|)^{1/3} + phi), phi = 0 (totally real) or -pi/2, and
/// P2 = P_K(Y) - P1. Requires 1 <= y <= Y <= N.
VoronoiValue voronoi_P1(const FieldSpec& field, const ArithTables& tables, const RhoEstimate& rho, double Y, double y,
                        VoronoiNormalization norm = VoronoiNormalization::field_scaled);

struct TruncationScan {
  std::vector<double> ys;
  std::vector<double> median_abs_P2;
  double fitted_exponent = 0.0;
  std::size_t sample_count = 0;
};

/// Median |P2(Y; y)| over `count` evenly spaced Y in [Y_lo, Y_hi] for each
/// y, with the least-squares slope of log median against log y.
TruncationScan voronoi_truncation_scan(const FieldSpec& field, const ArithTables& tables, const RhoEstimate& rho,
                                       double Y_lo, double Y_hi, std::size_t count, const std::vector<double>& ys,
                                       VoronoiNormalization norm = VoronoiNormalization::field_scaled,
                                       Parallelism par = {});

/// Integral of P2(Y; y)^2 over [T, 2T] (4-point Gauss-Legendre per unit
/// cell). Requires 1 <= y <= T^{1/3} and 2T <= N.
double meansquare_P2(const FieldSpec& field, const ArithTables& tables, const RhoEstimate& rho, double T, double y,
                     VoronoiNormalization norm = VoronoiNormalization::field_scaled, Parallelism par = {});

struct CXResult {
  double X = 0.0;
  double value = 0.0;
  /// Rigorous bound on |c(X) - value| from the primes above the cutoff.
  double tail_bound = 0.0;
  double relative_tail = 0.0;
  std::uint64_t prime_cutoff = 0;
};

inline constexpr std::uint64_t kDefaultCXCutoff = 10'000'000;
inline constexpr double kDefaultCXTolerance = 0.05;

/// c(X) = (1/6 pi^2) sum_{m m1, m m2 <= X, (m1, m2) = 1} m^{4/3} a_K(m m1) a_K(m m2)
/// M_K(X/(m m1)) M_K(X/(m m2)) sum_n a_K(n m1) a_K(n m2) n^{-4/3}. The inner
/// series is evaluated as an Euler product over primes <= prime_cutoff; the
/// omitted primes multiply it by a factor in [1, e^beta] with beta explicit.
/// Throws PreconditionError if X > 10^3, X > N, or the relative tail
/// exceeds `tolerance`.
CXResult compute_cX(const FieldSpec& field, const ArithTables& tables, double X,
                    std::uint64_t prime_cutoff = kDefaultCXCutoff, double tolerance = kDefaultCXTolerance);

struct MeanSquareReport {
  double X = 0.0;
  double T = 0.0;
  double integral_R2 = 0.0;
  double main_term = 0.0;
  double ratio = 0.0;
  /// ratio / |D|^{1/3}: the mean square of the Voronoi series carries this
  /// discriminant factor, which c(X) as defined omits.
  double disc_scaled_ratio = 0.0;
  CXResult cX;
  std::size_t samples = 0;
  double quadrature_error_est = 0.0;
};

/// Integral of R_K(X, Y)^2 over [T, 2T]. R is a step function minus rho Y,
/// so each unit cell is integrated exactly from S_K at the cell midpoint;
/// the cells are grouped into `samples` panels (>= 33). The error estimate
/// compares against the midpoint rule and adds a rounding bound.
MeanSquareReport meansquare_R(const FieldSpec& field, const ArithTables& tables, const RhoEstimate& rho, double X,
                              double T, std::size_t samples, Parallelism par = {},
                              std::uint64_t cx_cutoff = kDefaultCXCutoff, double cx_tolerance = kDefaultCXTolerance);

/// Closed form c(X) (3/5) ((2T)^{5/3} - T^{5/3}).
double meansquare_main_term(double cX, double T);

struct MeanSquareTrend {
  std::vector<MeanSquareReport> rows;
  /// Sign pattern of successive ratio differences: +1 up, -1 down, 0 flat.
  std::vector<int> ratio_steps;
  bool monotone = false;
};

MeanSquareTrend meansquare_trend(const FieldSpec& field, const ArithTables& tables, const RhoEstimate& rho, double X,
                                 const std::vector<double>& Ts, std::size_t samples, Parallelism par = {},
                                 std::uint64_t cx_cutoff = kDefaultCXCutoff, double cx_tolerance = kDefaultCXTolerance);

struct ClassicalS1 {
  std::int64_t value = 0;
  /// Main term Y of the regime X^2 << Y.
  double main_large_Y = 0.0;
  /// Main term -3 X^2 / (2 pi^2) of the regime X < Y < X^2.
  double main_small_Y = 0.0;
};

/// S_1(X, Y) = sum_{m<=X} sum_{n<=Y} c_m(n) via sum_{d <= X} d M(X/d) floor(Y/d).
/// Requires X <= 10^4 and Y <= 10^7.
ClassicalS1 classical_S1(double X, double Y);

/// |R_K(X, Y)| / (X^{8/5} Y^{2/5} + X^{11/8} Y^{1/2}).
double theorem1_ratio(const ArithTables& tables, const RhoEstimate& rho, double X, double Y);

struct ExpSumProbe {
  double S0 = 0.0;
  double S1 = 0.0;
  double bound0 = 0.0;
  double bound1 = 0.0;
  double ratio0 = 0.0;
  double ratio1 = 0.0;
};

/// Evaluates |S0| and S1 of the triple exponential sums with phase
/// U h^beta n^gamma m^alpha / (H^beta N^gamma M^alpha); the coefficients
/// a(h, n), b(m) are unimodular with random phases drawn from `rng`
/// (or identically 1 when rng is null). |.|* is the maximum over initial
/// segments of the m-range. Bounds omit the epsilon power.
ExpSumProbe lemma4_probe(std::uint64_t H, std::uint64_t N, std::uint64_t M, double U, double alpha, double beta,
                         double gamma, std::mt19937_64* rng = nullptr);

}  // namespace cubic
