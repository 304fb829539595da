#pragma once

// Exact bookkeeping for asymptotic bounds: sums of monomials with rational
// exponents, balancing of a free parameter between two ranges, and
// domination inside a cone of ordered variables.

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubic::exponents {

using Rational = boost::multiprecision::cpp_rational;

class ExprError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Product of variables raised to rational powers; zero powers are never stored.
class Monomial {
 public:
  Monomial() = default;
  Monomial(std::initializer_list<std::pair<const std::string, Rational>> init);

  [[nodiscard]] Rational exponent(const std::string& var) const;
  void set(const std::string& var, const Rational& e);
  [[nodiscard]] const std::map<std::string, Rational>& exponents() const { return exp_; }
  [[nodiscard]] bool is_constant() const { return exp_.empty(); }

  Monomial operator*(const Monomial& o) const;
  Monomial operator/(const Monomial& o) const;
  [[nodiscard]] Monomial pow(const Rational& r) const;
  /// Drops `var`, returning its former exponent.
  Rational remove(const std::string& var);

  /// Numeric value at an assignment of every variable it uses.
  [[nodiscard]] double evaluate(const std::map<std::string, double>& at) const;

  /// "X^{31/9} T^{14/9}", variables in `order` first, then alphabetical.
  [[nodiscard]] std::string to_string(const std::vector<std::string>& order = {}) const;

  bool operator==(const Monomial&) const = default;
  bool operator<(const Monomial& o) const { return exp_ < o.exp_; }

 private:
  std::map<std::string, Rational> exp_;
};

/// Finite sum of monomials with implied positive constants.
struct BoundExpr {
  std::vector<Monomial> terms;
  /// Preferred variable order for printing and canonical sorting.
  std::vector<std::string> order;

  /// Sorted by decreasing exponents in `order`, duplicates removed.
  [[nodiscard]] BoundExpr canonical() const;
  [[nodiscard]] double evaluate(const std::map<std::string, double>& at) const;
  [[nodiscard]] std::string to_string() const;
  /// Set equality of terms.
  [[nodiscard]] bool same_terms(const BoundExpr& o) const;
};

/// Parses "X^{11/3} T^{4/3} y^{1/3} + X^{10/3} T^{5/3} y^{-1/3}". Factors
/// are separated by spaces or '*'; exponents are "k", "-k", "{p/q}"; a term
/// "1" is the constant monomial. Variable order follows first appearance.
BoundExpr parse_expr(const std::string& text);
Monomial parse_monomial(const std::string& text);

std::string format_rational(const Rational& r);

/// Variables >= 1 linked by relations v >= w, written as v = w * s_v with
/// independent parameters s_v >= 1. Each variable has exactly one lower
/// bound (1 or another variable), so the substitution is triangular.
class ConstraintCone {
 public:
  ConstraintCone() = default;

  /// Adds v >= lower; lower is "1" or an already declared variable.
  ConstraintCone& add(const std::string& v, const std::string& lower = "1");

  /// Parses "Y>=X, X>=1" (also accepts "≥"); declarations may come in any order.
  static ConstraintCone parse(const std::string& text);

  [[nodiscard]] bool contains_variable(const std::string& v) const;
  /// The chain of variables from v down to the one bounded by 1, inclusive.
  [[nodiscard]] std::vector<std::string> chain(const std::string& v) const;
  /// Exponents of the parameters s_v after substituting every variable.
  [[nodiscard]] std::map<std::string, Rational> generator_exponents(const Monomial& m) const;
  /// Whether a numeric assignment satisfies every relation (with relative slack tol).
  [[nodiscard]] bool contains(const std::map<std::string, double>& at, double tol = 1e-12) const;
  [[nodiscard]] const std::vector<std::string>& variables() const { return vars_; }
  [[nodiscard]] std::string to_string() const;

 private:
  std::vector<std::string> vars_;
  std::map<std::string, std::string> lower_;
};

/// a << b throughout the cone: every parameter exponent of b/a is >= 0.
/// Throws ExprError if either monomial uses a variable outside the cone.
bool dominates(const Monomial& a, const Monomial& b, const ConstraintCone& cone);

/// Removes every term dominated by another (keeping one copy of equal
/// terms); idempotent and independent of input order.
BoundExpr simplify(const BoundExpr& e, const ConstraintCone& cone);

struct Absorption {
  Monomial removed;
  Monomial by;
  /// The weakest relation between cone variables under which removed << by,
  /// e.g. "Y >= X" or "Y >= X^{11/4}"; "cone" if it is not a two-variable relation.
  std::string needs;
};

/// Like simplify, recording for each removed term the surviving term that
/// absorbs it and the relation that absorption needs.
BoundExpr simplify_reporting(const BoundExpr& e, const ConstraintCone& cone, std::vector<Absorption>& absorbed);

struct Balanced {
  /// (A_i^{b_j} B_j^{a_i})^{1/(a_i + b_j)} for each pair.
  BoundExpr cross;
  /// A_i H1^{a_i} and B_j H2^{-b_j}.
  BoundExpr endpoints;
  /// Terms free of H, carried unchanged.
  BoundExpr passthrough;

  [[nodiscard]] BoundExpr all() const;
};

/// Eliminates H from L(H) = sum A_i H^{a_i} + sum B_j H^{-b_j} (+ H-free
/// terms) for H in [H1, H2]. Throws ExprError if L has no term involving H
/// or H1, H2 involve H.
Balanced balance_parts(const BoundExpr& L, const std::string& H, const Monomial& H1, const Monomial& H2);
BoundExpr balance(const BoundExpr& L, const std::string& H, const Monomial& H1, const Monomial& H2);

/// Pre-split form: `positive` terms must have H-exponent > 0 and `negative`
/// terms H-exponent < 0, otherwise ExprError.
BoundExpr balance(const BoundExpr& positive, const BoundExpr& negative, const std::string& H, const Monomial& H1,
                  const Monomial& H2);

using Assignment = std::map<std::string, double>;

/// For each grid point: min of L(H) over 64 log-spaced H in [H1, H2],
/// divided by `balanced` at the point. Returns the maximum over the grid.
/// Throws ExprError for an empty grid or a point outside the cone.
double numeric_envelope_check(const BoundExpr& L, const BoundExpr& balanced, const std::string& H, const Monomial& H1,
                              const Monomial& H2, const ConstraintCone& cone, const std::vector<Assignment>& grid);

/// m n + m + n for m terms increasing in H and n decreasing.
std::size_t envelope_constant(const BoundExpr& L, const std::string& H);

struct Scenario {
  std::string name;
  BoundExpr input;
  std::string variable;
  Monomial H1;
  Monomial H2;
  ConstraintCone cone;
  Balanced balanced;
  BoundExpr result;
  std::vector<Absorption> absorbed;
  /// Expression balanced in the numeric envelope check; `input` when empty.
  BoundExpr envelope_input;
  std::vector<Assignment> grid;
  double envelope_ratio = 0.0;
  std::size_t envelope_limit = 0;
};

/// Mean-square error terms in (X, T, y), y in [1, (T/X)^{1/3}], cone T >= X >= 1.
Scenario theorem2_scenario();
/// The seven (Y, M, y) terms with y in [1, Y/M], cone Y >= M >= 1. The
/// result keeps every cross and H-free term and absorbs the endpoint terms.
Scenario r4_scenario();
/// The six R-4 terms at M = X plus X Y^{43/96}, simplified under Y >= X >= 1.
/// The envelope check balances the seven (Y, X, y) terms against the result.
Scenario theorem1_scenario();

/// "<expr> (+ε)".
std::string with_epsilon(const BoundExpr& e);

}  // namespace cubic::exponents
