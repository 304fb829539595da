#include "cubic/exponents.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace cubic::exponents {

namespace {

bool is_name_char(char c, bool first) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_' ||
         (!first && std::isdigit(static_cast<unsigned char>(c)) != 0);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Rational parse_rational(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ExprError("empty exponent");
  const auto slash = t.find('/');
  auto parse_int = [&](const std::string& s) {
    const std::string u = trim(s);
    std::size_t i = (!u.empty() && (u[0] == '-' || u[0] == '+')) ? 1 : 0;
    if (i == u.size()) throw ExprError("bad exponent '" + text + "'");
    for (std::size_t j = i; j < u.size(); ++j) {
      if (std::isdigit(static_cast<unsigned char>(u[j])) == 0) throw ExprError("bad exponent '" + text + "'");
    }
    return boost::multiprecision::cpp_int(u[0] == '+' ? u.substr(1) : u);
  };
  if (slash == std::string::npos) return Rational(parse_int(t));
  const auto den = parse_int(t.substr(slash + 1));
  if (den == 0) throw ExprError("zero denominator in '" + text + "'");
  return Rational(parse_int(t.substr(0, slash)), den);
}

// Variables ordered by `order`, then alphabetically.
std::vector<std::string> print_order(const std::map<std::string, Rational>& exps, const std::vector<std::string>& order) {
  std::vector<std::string> out;
  for (const auto& v : order) {
    if (exps.count(v) != 0U) out.push_back(v);
  }
  for (const auto& [v, e] : exps) {
    (void)e;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

}  // namespace

std::string format_rational(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << '/' << denominator(r);
  return os.str();
}

Monomial::Monomial(std::initializer_list<std::pair<const std::string, Rational>> init) {
  for (const auto& [v, e] : init) set(v, exponent(v) + e);
}

Rational Monomial::exponent(const std::string& var) const {
  const auto it = exp_.find(var);
  return it == exp_.end() ? Rational(0) : it->second;
}

void Monomial::set(const std::string& var, const Rational& e) {
  if (var.empty() || !is_name_char(var[0], true) ||
      !std::all_of(var.begin(), var.end(), [](char c) { return is_name_char(c, false); })) {
    throw ExprError("invalid variable name '" + var + "'");
  }
  if (e == 0) {
    exp_.erase(var);
  } else {
    exp_[var] = e;
  }
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r = *this;
  for (const auto& [v, e] : o.exp_) r.set(v, r.exponent(v) + e);
  return r;
}

Monomial Monomial::operator/(const Monomial& o) const { return *this * o.pow(-1); }

Monomial Monomial::pow(const Rational& k) const {
  Monomial r;
  for (const auto& [v, e] : exp_) r.set(v, e * k);
  return r;
}

Rational Monomial::remove(const std::string& var) {
  const Rational e = exponent(var);
  exp_.erase(var);
  return e;
}

double Monomial::evaluate(const std::map<std::string, double>& at) const {
  double log_value = 0.0;
  for (const auto& [v, e] : exp_) {
    const auto it = at.find(v);
    if (it == at.end()) throw ExprError("no value for variable " + v);
    if (!(it->second > 0.0)) throw ExprError("variable " + v + " must be positive");
    log_value += static_cast<double>(e) * std::log(it->second);
  }
  return std::exp(log_value);
}

std::string Monomial::to_string(const std::vector<std::string>& order) const {
  if (exp_.empty()) return "1";
  std::string out;
  for (const auto& v : print_order(exp_, order)) {
    if (!out.empty()) out += ' ';
    const Rational& e = exp_.at(v);
    out += v;
    if (e == 1) continue;
    if (denominator(e) == 1 && e > 0) {
      out += '^' + format_rational(e);
    } else {
      out += "^{" + format_rational(e) + "}";
    }
  }
  return out;
}

BoundExpr BoundExpr::canonical() const {
  BoundExpr out;
  out.order = order;
  std::set<Monomial> seen;
  for (const auto& t : terms) {
    if (seen.insert(t).second) out.terms.push_back(t);
  }
  // decreasing exponents in print order; ties broken by the full map
  std::vector<std::string> vars = order;
  std::set<std::string> extra;
  for (const auto& t : out.terms) {
    for (const auto& [v, e] : t.exponents()) {
      (void)e;
      if (std::find(order.begin(), order.end(), v) == order.end()) extra.insert(v);
    }
  }
  vars.insert(vars.end(), extra.begin(), extra.end());
  std::sort(out.terms.begin(), out.terms.end(), [&](const Monomial& a, const Monomial& b) {
    for (const auto& v : vars) {
      const Rational ea = a.exponent(v);
      const Rational eb = b.exponent(v);
      if (ea != eb) return ea > eb;
    }
    return false;
  });
  return out;
}

double BoundExpr::evaluate(const std::map<std::string, double>& at) const {
  double s = 0.0;
  for (const auto& t : terms) s += t.evaluate(at);
  return s;
}

std::string BoundExpr::to_string() const {
  const BoundExpr c = canonical();
  if (c.terms.empty()) return "0";
  std::string out;
  for (const auto& t : c.terms) {
    if (!out.empty()) out += " + ";
    out += t.to_string(order);
  }
  return out;
}

bool BoundExpr::same_terms(const BoundExpr& o) const {
  const std::set<Monomial> a(terms.begin(), terms.end());
  const std::set<Monomial> b(o.terms.begin(), o.terms.end());
  return a == b;
}

namespace {

Monomial parse_term(const std::string& text, std::vector<std::string>& order) {
  Monomial m;
  if (trim(text) == "1") return m;
  std::size_t i = 0;
  const std::size_t n = text.size();
  bool any = false;
  while (i < n) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '*') {
      ++i;
      continue;
    }
    if (!is_name_char(c, true)) throw ExprError("unexpected '" + std::string(1, c) + "' in term '" + trim(text) + "'");
    std::size_t j = i;
    while (j < n && is_name_char(text[j], false)) ++j;
    const std::string var = text.substr(i, j - i);
    Rational e = 1;
    i = j;
    if (i < n && text[i] == '^') {
      ++i;
      if (i < n && text[i] == '{') {
        const auto close = text.find('}', i);
        if (close == std::string::npos) throw ExprError("unclosed '{' in term '" + trim(text) + "'");
        e = parse_rational(text.substr(i + 1, close - i - 1));
        i = close + 1;
      } else {
        std::size_t k = i;
        if (k < n && (text[k] == '-' || text[k] == '+')) ++k;
        while (k < n && (std::isdigit(static_cast<unsigned char>(text[k])) != 0 || text[k] == '/')) ++k;
        e = parse_rational(text.substr(i, k - i));
        i = k;
      }
    }
    if (std::find(order.begin(), order.end(), var) == order.end()) order.push_back(var);
    m = m * Monomial{{var, e}};
    any = true;
  }
  if (!any) throw ExprError("empty term");
  return m;
}

// Splits on '+' outside braces.
std::vector<std::string> split_terms(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '{') ++depth;
    if (c == '}') --depth;
    const bool exponent_sign = i > 0 && text[i - 1] == '^';
    if (c == '+' && depth == 0 && !exponent_sign) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

BoundExpr parse_expr(const std::string& text) {
  BoundExpr e;
  for (const auto& part : split_terms(text)) e.terms.push_back(parse_term(part, e.order));
  return e;
}

Monomial parse_monomial(const std::string& text) {
  std::vector<std::string> order;
  return parse_term(text, order);
}

ConstraintCone& ConstraintCone::add(const std::string& v, const std::string& lower) {
  if (contains_variable(v)) throw ExprError("variable " + v + " already has a lower bound");
  if (lower != "1" && !contains_variable(lower)) throw ExprError("lower bound " + lower + " is not declared");
  Monomial{{v, 1}};  // validates the name
  vars_.push_back(v);
  lower_[v] = lower;
  return *this;
}

ConstraintCone ConstraintCone::parse(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> rels;
  std::string normalized = text;
  for (std::size_t p; (p = normalized.find("≥")) != std::string::npos;) normalized.replace(p, std::string("≥").size(), ">=");
  std::stringstream ss(normalized);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    const auto p = item.find(">=");
    if (p == std::string::npos) throw ExprError("cone relation '" + trim(item) + "' is not of the form v >= w");
    rels.emplace_back(trim(item.substr(0, p)), trim(item.substr(p + 2)));
  }
  ConstraintCone cone;
  // declare in dependency order
  while (!rels.empty()) {
    const auto it = std::find_if(rels.begin(), rels.end(),
                                 [&](const auto& r) { return r.second == "1" || cone.contains_variable(r.second); });
    if (it == rels.end()) throw ExprError("cone relations are cyclic or refer to an unbounded variable");
    cone.add(it->first, it->second);
    rels.erase(it);
  }
  return cone;
}

bool ConstraintCone::contains_variable(const std::string& v) const { return lower_.count(v) != 0U; }

std::vector<std::string> ConstraintCone::chain(const std::string& v) const {
  if (!contains_variable(v)) throw ExprError("unknown variable " + v);
  std::vector<std::string> out;
  for (std::string cur = v; cur != "1"; cur = lower_.at(cur)) out.push_back(cur);
  return out;
}

std::map<std::string, Rational> ConstraintCone::generator_exponents(const Monomial& m) const {
  std::map<std::string, Rational> g;
  for (const auto& [v, e] : m.exponents()) {
    for (const auto& s : chain(v)) g[s] += e;
  }
  return g;
}

bool ConstraintCone::contains(const std::map<std::string, double>& at, double tol) const {
  for (const auto& v : vars_) {
    const auto it = at.find(v);
    if (it == at.end()) return false;
    const std::string& w = lower_.at(v);
    const double lo = w == "1" ? 1.0 : at.at(w);
    if (it->second < lo * (1.0 - tol)) return false;
  }
  return true;
}

std::string ConstraintCone::to_string() const {
  std::string out;
  for (auto it = vars_.rbegin(); it != vars_.rend(); ++it) {
    if (!out.empty()) out += ", ";
    out += *it + " >= " + lower_.at(*it);
  }
  return out;
}

bool dominates(const Monomial& a, const Monomial& b, const ConstraintCone& cone) {
  for (const auto& [s, e] : cone.generator_exponents(b / a)) {
    (void)s;
    if (e < 0) return false;
  }
  // a variable of a or b that cancels in b/a must still belong to the cone
  for (const auto* m : {&a, &b}) {
    for (const auto& [v, e] : m->exponents()) {
      (void)e;
      if (!cone.contains_variable(v)) throw ExprError("unknown variable " + v);
    }
  }
  return true;
}

namespace {

// Weakest relation making ratio >= 1 on the cone, as text, with a sort key.
std::pair<std::string, Rational> needed_relation(const Monomial& ratio, const ConstraintCone& cone) {
  const auto& ex = ratio.exponents();
  if (ex.empty()) return {"none", Rational(0)};
  if (ex.size() == 1) return {ex.begin()->first + " >= 1", Rational(0)};
  if (ex.size() == 2) {
    auto it = ex.begin();
    const auto [v1, e1] = *it++;
    const auto [v2, e2] = *it;
    // orient as upper >= lower^k
    const auto c1 = cone.chain(v1);
    const auto c2 = cone.chain(v2);
    const bool v2_above = std::find(c2.begin(), c2.end(), v1) != c2.end();
    const bool v1_above = std::find(c1.begin(), c1.end(), v2) != c1.end();
    if (v1_above || v2_above) {
      const std::string& hi = v2_above ? v2 : v1;
      const std::string& lo = v2_above ? v1 : v2;
      const Rational eh = v2_above ? e2 : e1;
      const Rational el = v2_above ? e1 : e2;
      if (eh > 0) {
        const Rational k = el >= 0 ? Rational(0) : Rational(-el / eh);
        if (k == 0) return {hi + ", " + lo + " >= 1", k};
        if (k == 1) return {hi + " >= " + lo, k};
        return {hi + " >= " + lo + "^{" + format_rational(k) + "}", k};
      }
    }
  }
  return {"cone", Rational(1000000)};
}

}  // namespace

BoundExpr simplify_reporting(const BoundExpr& e, const ConstraintCone& cone, std::vector<Absorption>& absorbed) {
  const BoundExpr c = e.canonical();
  std::vector<bool> keep(c.terms.size(), true);
  for (std::size_t i = 0; i < c.terms.size(); ++i) {
    for (std::size_t j = 0; j < c.terms.size() && keep[i]; ++j) {
      if (i != j && dominates(c.terms[i], c.terms[j], cone)) keep[i] = false;
    }
  }
  BoundExpr out;
  out.order = e.order;
  for (std::size_t i = 0; i < c.terms.size(); ++i) {
    if (keep[i]) out.terms.push_back(c.terms[i]);
  }
  for (std::size_t i = 0; i < c.terms.size(); ++i) {
    if (keep[i]) continue;
    Absorption best;
    Rational best_key = -1;
    for (const auto& s : out.terms) {
      if (!dominates(c.terms[i], s, cone)) continue;
      const auto [text, key] = needed_relation(s / c.terms[i], cone);
      if (best_key < 0 || key < best_key) {
        best = {c.terms[i], s, text};
        best_key = key;
      }
    }
    absorbed.push_back(best);
  }
  return out;
}

BoundExpr simplify(const BoundExpr& e, const ConstraintCone& cone) {
  std::vector<Absorption> ignored;
  return simplify_reporting(e, cone, ignored);
}

BoundExpr Balanced::all() const {
  BoundExpr out;
  out.order = cross.order;
  for (const auto* part : {&cross, &endpoints, &passthrough}) {
    out.terms.insert(out.terms.end(), part->terms.begin(), part->terms.end());
  }
  return out.canonical();
}

namespace {

Balanced balance_split(const std::vector<std::pair<Monomial, Rational>>& pos,
                       const std::vector<std::pair<Monomial, Rational>>& neg, const std::vector<Monomial>& free,
                       const std::vector<std::string>& order, const Monomial& H1, const Monomial& H2) {
  Balanced b;
  b.cross.order = b.endpoints.order = b.passthrough.order = order;
  for (const auto& [A, a] : pos) {
    for (const auto& [B, nb] : neg) {
      const Rational bj = -nb;
      if (a + bj == 0) throw ExprError("balance: a_i + b_j = 0");
      b.cross.terms.push_back((A.pow(bj) * B.pow(a)).pow(1 / (a + bj)));
    }
  }
  for (const auto& [A, a] : pos) b.endpoints.terms.push_back(A * H1.pow(a));
  for (const auto& [B, nb] : neg) b.endpoints.terms.push_back(B * H2.pow(nb));
  b.passthrough.terms = free;
  b.cross = b.cross.canonical();
  b.endpoints = b.endpoints.canonical();
  b.passthrough = b.passthrough.canonical();
  return b;
}

void check_ranges(const std::string& H, const Monomial& H1, const Monomial& H2) {
  if (H1.exponent(H) != 0 || H2.exponent(H) != 0) throw ExprError("balance: range endpoints must not involve " + H);
}

}  // namespace

Balanced balance_parts(const BoundExpr& L, const std::string& H, const Monomial& H1, const Monomial& H2) {
  check_ranges(H, H1, H2);
  std::vector<std::pair<Monomial, Rational>> pos, neg;
  std::vector<Monomial> free;
  for (Monomial t : L.terms) {
    const Rational e = t.remove(H);
    if (e > 0) {
      pos.emplace_back(t, e);
    } else if (e < 0) {
      neg.emplace_back(t, e);
    } else {
      free.push_back(t);
    }
  }
  if (pos.empty() && neg.empty()) throw ExprError("balance: no term involves " + H);
  std::vector<std::string> order;
  for (const auto& v : L.order) {
    if (v != H) order.push_back(v);
  }
  return balance_split(pos, neg, free, order, H1, H2);
}

BoundExpr balance(const BoundExpr& L, const std::string& H, const Monomial& H1, const Monomial& H2) {
  return balance_parts(L, H, H1, H2).all();
}

BoundExpr balance(const BoundExpr& positive, const BoundExpr& negative, const std::string& H, const Monomial& H1,
                  const Monomial& H2) {
  check_ranges(H, H1, H2);
  std::vector<std::pair<Monomial, Rational>> pos, neg;
  for (Monomial t : positive.terms) {
    const Rational e = t.remove(H);
    if (e <= 0) throw ExprError("balance: term in the increasing part has " + H + "-exponent " + format_rational(e));
    pos.emplace_back(t, e);
  }
  for (Monomial t : negative.terms) {
    const Rational e = t.remove(H);
    if (e >= 0) throw ExprError("balance: term in the decreasing part has " + H + "-exponent " + format_rational(e));
    neg.emplace_back(t, e);
  }
  if (pos.empty() && neg.empty()) throw ExprError("balance: both parts are empty");
  std::vector<std::string> order;
  for (const auto* part : {&positive, &negative}) {
    for (const auto& v : part->order) {
      if (v != H && std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
    }
  }
  return balance_split(pos, neg, {}, order, H1, H2).all();
}

std::size_t envelope_constant(const BoundExpr& L, const std::string& H) {
  std::size_t m = 0;
  std::size_t n = 0;
  for (const auto& t : L.terms) {
    const Rational e = t.exponent(H);
    if (e > 0) ++m;
    if (e < 0) ++n;
  }
  return m * n + m + n;
}

double numeric_envelope_check(const BoundExpr& L, const BoundExpr& balanced, const std::string& H, const Monomial& H1,
                              const Monomial& H2, const ConstraintCone& cone, const std::vector<Assignment>& grid) {
  if (grid.empty()) throw ExprError("numeric_envelope_check: empty grid");
  constexpr int kPoints = 64;
  double worst = 0.0;
  for (const auto& point : grid) {
    if (!cone.contains(point)) throw ExprError("numeric_envelope_check: grid point outside the cone");
    const double lo = H1.evaluate(point);
    const double hi = H2.evaluate(point);
    if (!(lo <= hi * (1.0 + 1e-12))) throw ExprError("numeric_envelope_check: H1 > H2 at a grid point");
    double best = INFINITY;
    for (int k = 0; k < kPoints; ++k) {
      const double t = hi > lo ? static_cast<double>(k) / (kPoints - 1) : 0.0;
      Assignment at = point;
      at[H] = lo * std::pow(hi / lo, t);
      best = std::min(best, L.evaluate(at));
    }
    worst = std::max(worst, best / balanced.evaluate(point));
  }
  return worst;
}

namespace {

std::vector<Assignment> grid_of(const std::string& a, const std::vector<double>& as, const std::string& b,
                                const std::vector<double>& bs) {
  std::vector<Assignment> g;
  for (double x : as) {
    for (double y : bs) g.push_back({{a, x}, {b, y}});
  }
  return g;
}

constexpr const char* kR4Terms =
    "Y^{7/18} M^{23/18} y^{2/9} + Y^{1/3} M^{17/12} y^{1/3} + Y^{5/12} M^{29/24} y^{1/6} + "
    "Y^{1/6} M^{11/6} y^{1/6} + Y^{1/3} M^{5/3} y^{1/12} + Y^{2/3} M^{4/3} y^{-1/3} + M^2";

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t p = 0; (p = s.find(from, p)) != std::string::npos; p += to.size()) s.replace(p, from.size(), to);
  return s;
}

void finish(Scenario& s) {
  const BoundExpr& L = s.envelope_input.terms.empty() ? s.input : s.envelope_input;
  s.envelope_limit = envelope_constant(L, s.variable);
  if (!s.grid.empty()) s.envelope_ratio = numeric_envelope_check(L, s.result, s.variable, s.H1, s.H2, s.cone, s.grid);
}

}  // namespace

Scenario theorem2_scenario() {
  Scenario s;
  s.name = "theorem2";
  s.input = parse_expr("X^{11/3} T^{4/3} y^{1/3} + X^{10/3} T^{5/3} y^{-1/3} + X^{17/6} T^{5/3} y^{-1/6} + X^{7/2} T^{3/2}");
  s.variable = "y";
  s.H1 = Monomial{};
  s.H2 = parse_monomial("T^{1/3} X^{-1/3}");
  s.cone = ConstraintCone::parse("X >= 1, T >= X");
  s.balanced = balance_parts(s.input, s.variable, s.H1, s.H2);
  s.result = simplify_reporting(s.balanced.all(), s.cone, s.absorbed);
  s.grid = grid_of("X", {3, 10}, "T", {1e3, 1e5});
  finish(s);
  return s;
}

Scenario r4_scenario() {
  Scenario s;
  s.name = "r4";
  s.input = parse_expr(kR4Terms);
  s.variable = "y";
  s.H1 = Monomial{};
  s.H2 = parse_monomial("Y M^{-1}");
  s.cone = ConstraintCone::parse("M >= 1, Y >= M");
  s.balanced = balance_parts(s.input, s.variable, s.H1, s.H2);
  BoundExpr core = s.balanced.cross;
  core.terms.insert(core.terms.end(), s.balanced.passthrough.terms.begin(), s.balanced.passthrough.terms.end());
  core = core.canonical();
  s.result = core;
  for (const auto& t : s.balanced.endpoints.terms) {
    bool covered = false;
    for (const auto& c : core.terms) {
      if (dominates(t, c, s.cone)) {
        covered = true;
        s.absorbed.push_back({t, c, needed_relation(c / t, s.cone).first});
        break;
      }
    }
    if (!covered) s.result.terms.push_back(t);
  }
  s.result = s.result.canonical();
  s.grid = grid_of("Y", {1e6, 1e9}, "M", {10, 1e3});
  finish(s);
  return s;
}

Scenario theorem1_scenario() {
  Scenario s;
  s.name = "theorem1";
  s.input = parse_expr("X^{13/10} Y^{1/2} + X^{11/8} Y^{1/2} + X^{5/4} Y^{1/2} + X^{5/3} Y^{1/3} + X^{8/5} Y^{2/5} + "
                       "X^2 + X Y^{43/96}");
  s.cone = ConstraintCone::parse("X >= 1, Y >= X");
  s.result = simplify_reporting(s.input, s.cone, s.absorbed);
  s.envelope_input = parse_expr(replace_all(kR4Terms, "M", "X"));
  s.variable = "y";
  s.H1 = Monomial{};
  s.H2 = parse_monomial("Y X^{-1}");
  s.grid = {{{"X", 10.0}, {"Y", 1e3}}, {{"X", 10.0}, {"Y", 1e4}}, {{"X", 100.0}, {"Y", 1e6}}, {{"X", 100.0}, {"Y", 1e8}}};
  finish(s);
  return s;
}

std::string with_epsilon(const BoundExpr& e) { return e.to_string() + " (+ε)"; }

}  // namespace cubic::exponents
