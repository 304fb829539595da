#include "cubic/exponents.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace cubic::exponents;

namespace {

Monomial mono(const std::string& s) { return parse_monomial(s); }

BoundExpr expr_of(std::initializer_list<const char*> terms) {
  BoundExpr e;
  for (const char* t : terms) e.terms.push_back(mono(t));
  return e;
}

Rational q(long p, long r = 1) { return Rational(p, r); }

}  // namespace

TEST_CASE("monomial parsing and printing") {
  const auto m = mono("X^{31/9} T^{14/9}");
  CHECK(m.exponent("X") == q(31, 9));
  CHECK(m.exponent("T") == q(14, 9));
  CHECK(m.to_string({"X", "T"}) == "X^{31/9} T^{14/9}");
  CHECK(mono("X^2*Y^-1").to_string({"X", "Y"}) == "X^2 Y^{-1}");
  CHECK(mono("X Y X").to_string() == "X^2 Y");
  CHECK(mono("X^{2/4}") == mono("X^{1/2}"));
  CHECK(mono("X^{1/3} X^{-1/3}").is_constant());
  CHECK(mono("1").to_string() == "1");
  CHECK_THROWS_AS(mono("X^{1/0}"), ExprError);
  CHECK_THROWS_AS(mono("3 X"), ExprError);
  CHECK_THROWS_AS(mono("X^{1/3"), ExprError);
  const auto e = parse_expr("X^{11/3} T^{4/3} y^{1/3} + X^{10/3} T^{5/3} y^{-1/3}");
  REQUIRE(e.terms.size() == 2);
  CHECK(e.order == std::vector<std::string>{"X", "T", "y"});
  CHECK(e.terms[1].exponent("y") == q(-1, 3));
  CHECK(parse_expr("X^+2 + Y").terms[0].exponent("X") == 2);
}

TEST_CASE("cones and domination") {
  const auto cone = ConstraintCone::parse("T >= X, X >= 1");
  CHECK(cone.chain("T") == std::vector<std::string>{"T", "X"});
  CHECK(dominates(mono("X^{7/2} T^{3/2}"), mono("X^{31/9} T^{14/9}"), cone));
  CHECK(dominates(mono("X^2"), mono("X^2"), cone));
  const auto yx = ConstraintCone::parse("Y ≥ X, X ≥ 1");
  CHECK_FALSE(dominates(mono("X^2"), mono("Y"), yx));
  CHECK(dominates(mono("X"), mono("Y"), yx));
  CHECK_THROWS_AS(dominates(mono("Z"), mono("X"), yx), ExprError);
  CHECK_THROWS_AS(ConstraintCone::parse("Y >= X"), ExprError);
  CHECK_THROWS_AS(ConstraintCone::parse("Y >= X, X >= Y"), ExprError);
  // X^a T^b is dominated by 1 iff ... the closed-form rule b >= 0, a + b >= 0 for the ratio
  for (int a = -3; a <= 3; ++a) {
    for (int b = -3; b <= 3; ++b) {
      Monomial r{{"X", q(a, 2)}, {"T", q(b, 3)}};
      CHECK(dominates(Monomial{}, r, cone) == (q(b, 3) >= 0 && q(a, 2) + q(b, 3) >= 0));
    }
  }
}

TEST_CASE("domination is a partial order and agrees with sampling") {
  const auto cone = ConstraintCone::parse("X >= 1, Y >= X, Z >= Y");
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  auto random_mono = [&] {
    return Monomial{{"X", q(num(rng), den(rng))}, {"Y", q(num(rng), den(rng))}, {"Z", q(num(rng), den(rng))}};
  };
  std::uniform_real_distribution<double> lg(0.0, 8.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_mono();
    const auto b = random_mono();
    const auto c = random_mono();
    CHECK(dominates(a, a, cone));
    if (dominates(a, b, cone) && dominates(b, a, cone)) CHECK(a == b);
    if (dominates(a, b, cone) && dominates(b, c, cone)) CHECK(dominates(a, c, cone));
    // numeric oracle: extreme points of the cone in log coordinates
    bool numeric = true;
    const double extremes[4][3] = {{1, 1, 1}, {1e6, 1e6, 1e6}, {1, 1e6, 1e6}, {1, 1, 1e6}};
    for (const auto& p : extremes) {
      const Assignment at{{"X", p[0]}, {"Y", p[1]}, {"Z", p[2]}};
      if ((b / a).evaluate(at) < 1.0 - 1e-9) numeric = false;
    }
    CHECK(dominates(a, b, cone) == numeric);
    if (dominates(a, b, cone)) {
      for (int k = 0; k < 5; ++k) {
        const double x = std::exp(lg(rng));
        const double y = x * std::exp(lg(rng));
        const double z = y * std::exp(lg(rng));
        CHECK((b / a).evaluate({{"X", x}, {"Y", y}, {"Z", z}}) >= 1.0 - 1e-9);
      }
    }
  }
}

TEST_CASE("simplify") {
  const auto yx = ConstraintCone::parse("X >= 1, Y >= X");
  CHECK(simplify(expr_of({"X^2", "X^2"}), yx).terms.size() == 1);
  const auto single = expr_of({"X^{1/3} Y"});
  CHECK(simplify(single, yx).same_terms(single));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> num(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    BoundExpr e;
    for (int i = 0; i < 6; ++i) e.terms.push_back(Monomial{{"X", q(num(rng), 3)}, {"Y", q(num(rng), 4)}});
    const auto s = simplify(e, yx);
    CHECK(simplify(s, yx).same_terms(s));
    auto shuffled = e;
    std::shuffle(shuffled.terms.begin(), shuffled.terms.end(), rng);
    CHECK(simplify(shuffled, yx).to_string() == s.to_string());
    for (const auto& t : e.terms) {
      CHECK(std::any_of(s.terms.begin(), s.terms.end(), [&](const Monomial& k) { return dominates(t, k, yx); }));
    }
    for (const auto& a : s.terms) {
      for (const auto& b : s.terms) {
        if (!(a == b)) CHECK_FALSE(dominates(a, b, yx));
      }
    }
  }
}

TEST_CASE("balance") {
  const auto sym = parse_expr("X H + X^3 H^{-1}");
  const auto out = balance(sym, "H", Monomial{}, mono("X"));
  CHECK(out.same_terms(expr_of({"X^2", "X"})));
  const auto cone = ConstraintCone::parse("X >= 1");
  CHECK(simplify(out, cone).same_terms(expr_of({"X^2"})));
  CHECK(simplify(out, cone).to_string() == "X^2");
  // cross term is the value of the two terms where they meet: A H^a = B H^-b
  const auto L = parse_expr("X^{5/2} Y^{1/3} h^{3/7} + X^{-1} Y^2 h^{-2/5}");
  const auto parts = balance_parts(L, "h", Monomial{}, mono("Y"));
  REQUIRE(parts.cross.terms.size() == 1);
  const double X = 7.3, Y = 1234.5;
  const double A = std::pow(X, 2.5) * std::cbrt(Y);
  const double B = std::pow(X, -1.0) * Y * Y;
  const double h = std::pow(B / A, 1.0 / (3.0 / 7.0 + 2.0 / 5.0));
  CHECK(parts.cross.terms[0].evaluate({{"X", X}, {"Y", Y}}) == doctest::Approx(A * std::pow(h, 3.0 / 7.0)));
  CHECK(parts.endpoints.same_terms(expr_of({"X^{5/2} Y^{1/3}", "X^{-1} Y^{8/5}"})));
  // pre-split form
  CHECK(balance(parse_expr("X H"), parse_expr("X^3 H^{-1}"), "H", Monomial{}, mono("X")).same_terms(out));
  CHECK_THROWS_AS(balance(parse_expr("X H^{-1}"), parse_expr("X^3 H^{-1}"), "H", Monomial{}, mono("X")), ExprError);
  CHECK_THROWS_AS(balance(parse_expr("X H"), parse_expr("X^3"), "H", Monomial{}, mono("X")), ExprError);
  CHECK_THROWS_AS(balance(parse_expr("X^3"), "H", Monomial{}, mono("X")), ExprError);
  CHECK_THROWS_AS(balance(sym, "H", mono("H"), mono("X")), ExprError);
  // H-free terms are carried through
  CHECK(balance_parts(parse_expr("X H + X^5"), "H", Monomial{}, mono("X")).passthrough.same_terms(expr_of({"X^5"})));
}

TEST_CASE("numeric envelope") {
  const auto sym = parse_expr("X H + X^3 H^{-1}");
  const auto cone = ConstraintCone::parse("X >= 1");
  const auto bal = simplify(balance(sym, "H", Monomial{}, mono("X")), cone);
  const std::vector<Assignment> grid{{{"X", 10.0}}, {{"X", 100.0}}};
  const double r = numeric_envelope_check(sym, bal, "H", Monomial{}, mono("X"), cone, grid);
  CHECK(r <= 3.0);
  CHECK(r >= 1.0 - 1e-9);
  CHECK(envelope_constant(sym, "H") == 3);
  const auto one = parse_expr("X H");
  CHECK(numeric_envelope_check(one, balance(one, "H", mono("X"), mono("X")), "H", mono("X"), mono("X"), cone, grid) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(numeric_envelope_check(sym, bal, "H", Monomial{}, mono("X"), cone, {}), ExprError);
  CHECK_THROWS_AS(numeric_envelope_check(sym, bal, "H", Monomial{}, mono("X"), cone, {{{"X", 0.5}}}), ExprError);
}

TEST_CASE("mean-square scenario") {
  const auto s = theorem2_scenario();
  CHECK(s.result.same_terms(expr_of({"X^{31/9} T^{14/9}", "X^{26/9} T^{29/18}"})));
  CHECK(with_epsilon(s.result) == "X^{31/9} T^{14/9} + X^{26/9} T^{29/18} (+ε)");
  CHECK(s.envelope_ratio <= 10.0);
  CHECK(s.envelope_ratio <= static_cast<double>(s.envelope_limit));
  CHECK(s.balanced.cross.same_terms(expr_of({"X^{7/2} T^{3/2}", "X^{28/9} T^{14/9}"})));
}

TEST_CASE("truncation scenario in (Y, M)") {
  const auto s = r4_scenario();
  CHECK(s.result.same_terms(expr_of({"Y^{1/2} M^{13/10}", "Y^{1/2} M^{11/8}", "Y^{1/2} M^{5/4}", "Y^{1/3} M^{5/3}",
                                     "Y^{2/5} M^{8/5}", "M^2"})));
  CHECK(s.absorbed.size() == s.balanced.endpoints.terms.size());
  CHECK(s.envelope_ratio <= static_cast<double>(s.envelope_limit));
  // the six terms reduce further to the two of the final bound
  const auto cone = ConstraintCone::parse("M >= 1, Y >= M");
  CHECK(simplify(s.result, cone).same_terms(expr_of({"Y^{1/2} M^{11/8}", "Y^{2/5} M^{8/5}"})));
}

TEST_CASE("final bound scenario") {
  const auto s = theorem1_scenario();
  CHECK(s.result.same_terms(expr_of({"X^{11/8} Y^{1/2}", "X^{8/5} Y^{2/5}"})));
  REQUIRE(s.absorbed.size() == 5);
  for (const auto& a : s.absorbed) {
    if (a.removed == mono("X^2")) {
      CHECK(a.by == mono("X^{8/5} Y^{2/5}"));
      CHECK(a.needs == "Y >= X");
    }
    if (a.removed == mono("X Y^{43/96}")) CHECK(a.needs == "Y, X >= 1");
  }
}
