#include "cubic/cli.hpp"
#include "cubic/exponents.hpp"
#include "cubic/sums.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace cubic::cli {
namespace {

namespace ex = cubic::exponents;

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::string single_field(const RunConfig& cfg) {
  if (cfg.fields.size() > 1) throw PreconditionError("this experiment takes a single --field");
  return cfg.fields.empty() ? std::string("cubic-nonnormal-2") : cfg.fields.front();
}

std::vector<std::string> field_list(const RunConfig& cfg) {
  if (!cfg.fields.empty()) return cfg.fields;
  if (cfg.table) return {std::string()};
  return {"cubic-nonnormal-2", "cubic-cyclic-7"};
}

// Table size: --N if given (checked against the need), else the larger of the default and the need.
std::uint64_t table_size(const RunConfig& cfg, double needed, const std::string& what) {
  const auto need = static_cast<std::uint64_t>(std::ceil(needed));
  if (cfg.N) {
    if (*cfg.N < need) {
      throw PreconditionError(what + " needs N >= " + std::to_string(need) + " (got N=" + std::to_string(*cfg.N) + ")");
    }
    return *cfg.N;
  }
  return std::max(kDefaultN, need);
}

void attach(ExperimentReport& r, const FieldData& fd) {
  r.field = fd.field.name;
  r.N = fd.tables.N;
  r.rho = fd.rho;
}

VoronoiNormalization normalization(const RunConfig& cfg) {
  if (cfg.normalization == "field_scaled") return VoronoiNormalization::field_scaled;
  if (cfg.normalization == "literal") return VoronoiNormalization::literal;
  throw ConfigError("unknown normalization '" + cfg.normalization + "' (field_scaled or literal)");
}

std::vector<double> or_default(const std::vector<double>& v, std::vector<double> d) { return v.empty() ? d : v; }

ExperimentReport meansquare(const RunConfig& cfg) {
  ExperimentReport r;
  const double X = cfg.X.value_or(1.0);
  const double T = cfg.T.value_or(1000.0);
  const auto fd = prepare_field(cfg, single_field(cfg), table_size(cfg, 2 * T, "T=" + fmt(T)));
  attach(r, fd);
  const auto rep = meansquare_R(fd.field, fd.tables, fd.rho, X, T, cfg.samples, cfg.parallelism());
  r.columns = {"X", "T", "integral_R2", "main_term", "ratio", "disc_scaled_ratio", "cX", "cX_tail_bound",
               "quadrature_error_est"};
  r.add_row({rep.X, rep.T, rep.integral_R2, rep.main_term, rep.ratio, rep.disc_scaled_ratio, rep.cX.value,
             rep.cX.tail_bound, rep.quadrature_error_est});
  r.summary = {{"integral_R2", rep.integral_R2}, {"ratio", rep.ratio}, {"disc_scaled_ratio", rep.disc_scaled_ratio}};
  r.headline = {"integral of R^2 over [" + fmt(T) + ", " + fmt(2 * T) + "] = " + fmt(rep.integral_R2) +
                    " (error estimate " + fmt(rep.quadrature_error_est) + ")",
                "main term " + fmt(rep.main_term) + ", ratio " + fmt(rep.ratio) + ", ratio/|D|^{1/3} " +
                    fmt(rep.disc_scaled_ratio)};
  return r;
}

ExperimentReport meansquare_trend_exp(const RunConfig& cfg) {
  ExperimentReport r;
  const double X = cfg.X.value_or(5.0);
  const auto Ts = or_default(cfg.Ts, {1e3, 1e4, 1e5});
  const double Tmax = *std::max_element(Ts.begin(), Ts.end());
  r.columns = {"field", "X", "T", "integral_R2", "main_term", "ratio", "disc_scaled_ratio", "quadrature_error_est"};
  Json per_field = Json::object();
  for (const auto& name : field_list(cfg)) {
    const auto fd = prepare_field(cfg, name, table_size(cfg, 2 * Tmax, "T=" + fmt(Tmax)));
    attach(r, fd);
    const auto trend = meansquare_trend(fd.field, fd.tables, fd.rho, X, Ts, cfg.samples, cfg.parallelism());
    Json ratios = Json::array();
    for (const auto& row : trend.rows) {
      r.add_row({fd.field.name, row.X, row.T, row.integral_R2, row.main_term, row.ratio, row.disc_scaled_ratio,
                 row.quadrature_error_est});
      ratios.push_back(row.ratio);
    }
    per_field[fd.field.name] = {{"ratios", ratios}, {"ratio_steps", trend.ratio_steps}, {"monotone", trend.monotone}};
    std::string line = fd.field.name + ": ratios";
    for (const auto& row : trend.rows) line += " " + fmt(row.ratio);
    r.headline.push_back(line + (trend.monotone ? " (monotone)" : " (not monotone)"));
  }
  if (field_list(cfg).size() > 1) {
    r.field.reset();
    r.rho.reset();
  }
  r.summary = {{"trend", per_field}};
  return r;
}

ExperimentReport meansquare_p2_exp(const RunConfig& cfg) {
  ExperimentReport r;
  const auto Ts = or_default(cfg.Ts, {1e5, 2e5, 4e5});
  const auto ys = or_default(cfg.ys, {4, 32});
  const double Tmax = *std::max_element(Ts.begin(), Ts.end());
  const auto fd = prepare_field(cfg, single_field(cfg), table_size(cfg, 2 * Tmax, "T=" + fmt(Tmax)));
  attach(r, fd);
  const auto norm = normalization(cfg);
  r.columns = {"T", "y", "integral_P2_sq", "scaled_by_T^{5/3}"};
  std::map<double, std::vector<double>> by_T;
  std::map<double, std::vector<double>> by_y;
  for (double T : Ts) {
    for (double y : ys) {
      const double v = meansquare_P2(fd.field, fd.tables, fd.rho, T, y, norm, cfg.parallelism());
      r.add_row({T, y, v, v / std::pow(T, 5.0 / 3.0)});
      by_T[T].push_back(std::log(v));
      by_y[y].push_back(std::log(v));
    }
  }
  double y_exp = 0.0;
  std::vector<double> ly;
  for (double y : ys) ly.push_back(std::log(y));
  if (ys.size() > 1) {
    for (const auto& [T, vals] : by_T) y_exp += ls_slope(ly, vals) / static_cast<double>(by_T.size());
  }
  double T_exp = 0.0;
  std::vector<double> lT;
  for (double T : Ts) lT.push_back(std::log(T));
  if (Ts.size() > 1) {
    for (const auto& [y, vals] : by_y) T_exp += ls_slope(lT, vals) / static_cast<double>(by_y.size());
  }
  r.summary = {{"y_exponent", y_exp}, {"T_exponent", T_exp}, {"y_exponent_target", "<= -0.2 (report only)"}};
  r.headline = {"fitted y-exponent " + fmt(y_exp) + ", T-exponent " + fmt(T_exp)};
  return r;
}

ExperimentReport voronoi(const RunConfig& cfg) {
  ExperimentReport r;
  const double lo = cfg.Y.value_or(1e5);
  const double hi = 2 * lo;
  const auto ys = or_default(cfg.ys, {8, 64, 512});
  const auto norm = normalization(cfg);
  r.columns = {"field", "y", "median_abs_P2"};
  Json per_field = Json::object();
  for (const auto& name : field_list(cfg)) {
    const auto fd = prepare_field(cfg, name, table_size(cfg, hi, "Y=" + fmt(hi)));
    attach(r, fd);
    const auto scan = voronoi_truncation_scan(fd.field, fd.tables, fd.rho, lo, hi, 100, ys, norm, cfg.parallelism());
    for (std::size_t i = 0; i < ys.size(); ++i) r.add_row({fd.field.name, ys[i], scan.median_abs_P2[i]});
    const bool within = scan.fitted_exponent >= -0.6 && scan.fitted_exponent <= -0.15;
    per_field[fd.field.name] = {{"fitted_exponent", scan.fitted_exponent}, {"within_[-0.6,-0.15]", within}};
    r.headline.push_back(fd.field.name + ": fitted y-exponent of median |P2| = " + fmt(scan.fitted_exponent) +
                         " (prediction -1/3)");
  }
  if (field_list(cfg).size() > 1) {
    r.field.reset();
    r.rho.reset();
  }
  r.summary = {{"normalization", cfg.normalization}, {"Y_range", {lo, hi}}, {"samples", 100}, {"fits", per_field}};
  return r;
}

ExperimentReport theorem1(const RunConfig& cfg) {
  ExperimentReport r;
  std::vector<std::pair<double, double>> grid;
  if (cfg.X && cfg.Y) {
    grid.emplace_back(*cfg.X, *cfg.Y);
  } else {
    for (double X : {5.0, 8.0, 10.0, 20.0, 50.0}) {
      for (double k : {1.0, 10.0}) grid.emplace_back(X, k * X * X * X);
    }
  }
  double need = 0;
  for (const auto& [X, Y] : grid) need = std::max({need, X, Y});
  const auto fd = prepare_field(cfg, single_field(cfg), table_size(cfg, need, "Y=" + fmt(need)));
  attach(r, fd);
  r.columns = {"X", "Y", "R", "bound", "ratio"};
  double worst = 0.0;
  for (const auto& [X, Y] : grid) {
    const double R = remainder_R(fd.tables, fd.rho, X, Y);
    const double ratio = theorem1_ratio(fd.tables, fd.rho, X, Y);
    r.add_row({X, Y, R, std::fabs(R) / ratio, ratio});
    worst = std::max(worst, ratio);
  }
  r.summary = {{"max_ratio", worst}};
  r.headline = {"max |R| / (X^{8/5} Y^{2/5} + X^{11/8} Y^{1/2}) = " + fmt(worst)};
  return r;
}

ExperimentReport landau(const RunConfig& cfg) {
  ExperimentReport r;
  r.columns = {"field", "window_lo", "window_hi", "max_abs_P_over_sqrt_x"};
  Json per_field = Json::object();
  for (const auto& name : field_list(cfg)) {
    const auto fd = prepare_field(cfg, name, table_size(cfg, 1e3, "landau"));
    attach(r, fd);
    const auto& t = fd.tables;
    // sup over real x in [lo, hi]: check both sides of every jump
    auto window = [&](std::uint64_t lo, std::uint64_t hi) {
      double m = 0.0;
      for (std::uint64_t x = std::max<std::uint64_t>(lo, 1); x <= hi; ++x) {
        const double rx = fd.rho.value * static_cast<double>(x);
        const double s = std::sqrt(static_cast<double>(x));
        m = std::max({m, std::fabs(static_cast<double>(t.A_prefix[x]) - rx) / s,
                      std::fabs(static_cast<double>(t.A_prefix[x - 1]) - rx) / s});
      }
      return m;
    };
    const std::uint64_t N = t.N;
    const double w1 = window(N / 10, N / 2);
    const double w2 = window(N / 2, N);
    const double all = window(1, N);
    r.add_row({fd.field.name, N / 10, N / 2, w1});
    r.add_row({fd.field.name, N / 2, N, w2});
    r.add_row({fd.field.name, 1, N, all});
    const double variation = std::fabs(w2 - w1) / std::max(w1, w2);
    per_field[fd.field.name] = {{"window_ratio_lo", w1}, {"window_ratio_hi", w2}, {"variation", variation},
                                {"stable_below_20pct", variation < 0.2}, {"max_overall", all}};
    r.headline.push_back(fd.field.name + ": max |P_K(x)|/x^{1/2} = " + fmt(w1) + " on [N/10, N/2], " + fmt(w2) +
                         " on [N/2, N], variation " + fmt(variation));
  }
  if (field_list(cfg).size() > 1) {
    r.field.reset();
    r.rho.reset();
  }
  r.summary = {{"exponent", 0.5}, {"fields", per_field}};
  return r;
}

ExperimentReport lemma6(const RunConfig& cfg) {
  ExperimentReport r;
  const std::uint64_t N = cfg.N.value_or(kDefaultN);
  const unsigned l = cfg.l;
  const unsigned q = cfg.q;
  if (l < 2 || q < 1) throw PreconditionError("lemma6 needs l >= 2 and q >= 1");
  const double power = std::pow(static_cast<double>(l), q) - 1.0;
  r.columns = {"x", "sum", "ratio"};
  double lo = INFINITY, hi = 0.0;
  for (double x : or_default(cfg.Ts, {1e4, 1e5, 1e6})) {
    if (x > static_cast<double>(N)) throw PreconditionError("lemma6: x=" + fmt(x) + " exceeds N=" + std::to_string(N));
    const auto xi = static_cast<std::uint64_t>(x);
    const auto s = tau_power_sum(l, q, xi);
    const double ratio = static_cast<double>(s) / (x * std::pow(std::log(x), power));
    r.add_row({xi, s, ratio});
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  r.summary = {{"l", l}, {"q", q}, {"log_power", power}, {"max_ratio", hi}, {"min_ratio", lo}};
  r.headline = {"sum tau_" + std::to_string(l) + "^" + std::to_string(q) + " / (x (log x)^" + fmt(power) +
                "): max " + fmt(hi) + ", min " + fmt(lo)};
  return r;
}

ExperimentReport lemma7(const RunConfig& cfg) {
  ExperimentReport r;
  const double T = cfg.T.value_or(1e5);
  std::vector<double> Ts = cfg.Ts;
  if (Ts.empty()) Ts = {T / 100, T / 10, T};
  r.columns = {"T", "sum", "sum_over_T^{1/3}"};
  std::vector<double> lx, ly;
  for (double t : Ts) {
    const auto ti = static_cast<std::uint64_t>(t);
    const double s = lemma7_sum(ti, cfg.parallelism());
    r.add_row({ti, s, s / std::cbrt(t)});
    lx.push_back(std::log(t));
    ly.push_back(std::log(s));
  }
  const double slope = Ts.size() > 1 ? ls_slope(lx, ly) : 0.0;
  r.summary = {{"slope", slope}, {"slope_limit", 0.45}, {"within_limit", slope <= 0.45}};
  r.headline = {"slope of log(sum) vs log T = " + fmt(slope) + " (limit 0.45; bound T^{1/3+eps})"};
  return r;
}

ExperimentReport classical_s1(const RunConfig& cfg) {
  ExperimentReport r;
  std::vector<std::pair<double, double>> points{{200, std::pow(200.0, 2.5)}, {1000, std::pow(1000.0, 1.5)}};
  if (cfg.X && cfg.Y) points.emplace_back(*cfg.X, *cfg.Y);
  r.columns = {"X", "Y", "S1", "rel_dev_from_Y", "rel_dev_from_-3X^2/(2pi^2)", "rel_dev_from_two_term"};
  for (const auto& [X, Y] : points) {
    const auto s = classical_S1(X, Y);
    const auto v = static_cast<double>(s.value);
    r.add_row({X, Y, s.value, (v - Y) / Y, v / s.main_small_Y - 1.0, v / (Y + s.main_small_Y) - 1.0});
    r.headline.push_back("S1(" + fmt(X) + ", " + fmt(Y) + ") = " + std::to_string(s.value));
  }
  const double a = r.rows[0][3].get<double>();
  const double b = r.rows[1][4].get<double>();
  r.summary = {{"large_Y_rel_dev", a},       {"large_Y_within_0.05", std::fabs(a) <= 0.05},
               {"small_Y_rel_dev", b},       {"small_Y_within_0.1", std::fabs(b) <= 0.1},
               {"small_Y_two_term_rel_dev", r.rows[1][5]}};
  return r;
}

ExperimentReport cx(const RunConfig& cfg) {
  ExperimentReport r;
  const double X = cfg.X.value_or(10.0);
  const auto fd = prepare_field(cfg, single_field(cfg), table_size(cfg, X, "X=" + fmt(X)));
  attach(r, fd);
  const auto c = compute_cX(fd.field, fd.tables, X);
  r.columns = {"X", "cX", "tail_bound", "relative_tail", "prime_cutoff"};
  r.add_row({X, c.value, c.tail_bound, c.relative_tail, c.prime_cutoff});
  r.summary = {{"cX", c.value}, {"tail_bound", c.tail_bound}};
  r.headline = {"c(" + fmt(X) + ") = " + fmt(c.value) + " +/- " + fmt(c.tail_bound)};
  return r;
}

ExperimentReport rho(const RunConfig& cfg) {
  ExperimentReport r;
  r.columns = {"field", "method", "value", "std_error", "B"};
  Json per_field = Json::object();
  for (const auto& name : field_list(cfg)) {
    const auto fd = prepare_field(cfg, name, table_size(cfg, 1e3, "rho"));
    attach(r, fd);
    const auto s = estimate_rho(fd.tables, fd.tables.N, RhoMethod::series_b_over_m);
    const auto g = estimate_rho(fd.tables, fd.tables.N, RhoMethod::regression_on_A);
    for (const auto& e : {s, g}) r.add_row({fd.field.name, to_string(e.method), e.value, e.std_error, e.B});
    const double combined = std::hypot(s.std_error, g.std_error);
    per_field[fd.field.name] = {{"difference", s.value - g.value}, {"combined_std_error", combined},
                                {"agree_within_3_sigma", std::fabs(s.value - g.value) <= 3 * combined}};
    r.headline.push_back(fd.field.name + ": rho = " + fmt(s.value) + " (series), " + fmt(g.value) + " (regression)");
  }
  if (field_list(cfg).size() > 1) {
    r.field.reset();
    r.rho.reset();
  }
  r.summary = per_field;
  return r;
}

ExperimentReport lemma4(const RunConfig& cfg) {
  ExperimentReport r;
  std::mt19937_64 rng(cfg.seed);
  r.columns = {"H", "N", "M", "U", "S0", "bound0", "ratio0", "S1", "bound1", "ratio1"};
  double worst = 0.0;
  const std::uint64_t grid[][3] = {{4, 8, 32}, {8, 16, 64}, {2, 4, 256}, {16, 16, 128}};
  for (const auto& g : grid) {
    for (double U : {1e3, 1e5}) {
      const auto p = lemma4_probe(g[0], g[1], g[2], U, 1.0 / 3.0, 1.0, 1.0 / 3.0, &rng);
      r.add_row({g[0], g[1], g[2], U, p.S0, p.bound0, p.ratio0, p.S1, p.bound1, p.ratio1});
      worst = std::max({worst, p.ratio0, p.ratio1});
    }
  }
  r.summary = {{"alpha", "1/3"}, {"beta", 1}, {"gamma", "1/3"}, {"max_ratio", worst}};
  r.headline = {"max ratio to the exponential-sum bounds (epsilon omitted): " + fmt(worst)};
  return r;
}

void scenario_rows(ExperimentReport& r, const ex::Scenario& s) {
  r.columns = {"role", "term", "absorbed_by", "needs"};
  for (const auto& t : s.result.terms) r.add_row({"result", t.to_string(s.result.order), "", ""});
  for (const auto& a : s.absorbed) {
    r.add_row({"absorbed", a.removed.to_string(s.result.order), a.by.to_string(s.result.order), a.needs});
  }
  r.summary = {{"result", ex::with_epsilon(s.result)}, {"cone", s.cone.to_string()}};
  if (!s.grid.empty()) {
    r.summary["envelope_ratio"] = s.envelope_ratio;
    r.summary["envelope_limit"] = s.envelope_limit;
  }
  r.headline = {ex::with_epsilon(s.result)};
  for (const auto& a : s.absorbed) {
    r.headline.push_back("  absorbed " + a.removed.to_string(s.result.order) + " into " +
                         a.by.to_string(s.result.order) + " (needs " + a.needs + ")");
  }
  if (!s.grid.empty()) {
    r.headline.push_back("  numeric envelope ratio " + fmt(s.envelope_ratio) + " (limit " +
                         std::to_string(s.envelope_limit) + ")");
  }
}

ExperimentReport scenario(ex::Scenario s) {
  ExperimentReport r;
  scenario_rows(r, s);
  return r;
}

ExperimentReport balance_exp(const RunConfig& cfg) {
  if (cfg.expr.empty()) throw ConfigError("balance needs --expr");
  if (cfg.hi.empty()) throw ConfigError("balance needs --hi (upper end of the balanced variable)");
  if (cfg.cone.empty()) throw ConfigError("balance needs --cone, e.g. \"T >= X, X >= 1\"");
  ex::Scenario s;
  s.name = "balance";
  s.input = ex::parse_expr(cfg.expr);
  s.variable = cfg.balance_var;
  s.H1 = ex::parse_monomial(cfg.lo);
  s.H2 = ex::parse_monomial(cfg.hi);
  s.cone = ex::ConstraintCone::parse(cfg.cone);
  s.balanced = ex::balance_parts(s.input, s.variable, s.H1, s.H2);
  s.result = ex::simplify_reporting(s.balanced.all(), s.cone, s.absorbed);
  return scenario(s);
}

using Runner = std::function<ExperimentReport(const RunConfig&)>;

const std::map<std::string, Runner>& registry() {
  static const std::map<std::string, Runner> r{
      {"meansquare", meansquare},
      {"meansquare-trend", meansquare_trend_exp},
      {"meansquare-p2", meansquare_p2_exp},
      {"voronoi", voronoi},
      {"theorem1", theorem1},
      {"landau", landau},
      {"lemma6", lemma6},
      {"lemma7", lemma7},
      {"classical-s1", classical_s1},
      {"cx", cx},
      {"rho", rho},
      {"lemma4", lemma4},
      {"exponents-r4", [](const RunConfig&) { return scenario(ex::r4_scenario()); }},
      {"exponents-theorem1", [](const RunConfig&) { return scenario(ex::theorem1_scenario()); }},
      {"exponents-theorem2", [](const RunConfig&) { return scenario(ex::theorem2_scenario()); }},
      {"balance", balance_exp},
  };
  return r;
}

}  // namespace

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) {
    (void)fn;
    out.push_back(name);
  }
  return out;
}

ExperimentReport run_experiment(const RunConfig& cfg) {
  const auto it = registry().find(cfg.experiment);
  if (it == registry().end()) throw ConfigError("unknown experiment '" + cfg.experiment + "'");
  ExperimentReport r = it->second(cfg);
  r.experiment = cfg.experiment;
  r.config = cfg.to_json();
  r.config_hash = sha1_hex(r.config.dump());
  return r;
}

}  // namespace cubic::cli
