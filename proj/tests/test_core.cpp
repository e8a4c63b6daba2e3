#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "hardyrec/core/evaluate.hpp"
#include "hardyrec/core/expr.hpp"
#include "hardyrec/core/growth.hpp"
#include "hardyrec/error.hpp"

using namespace hr;

namespace {

HardyExpr P(const char* s) { return parse(s); }

// Random strings drawn from the expression grammar.
std::string random_expr(std::mt19937_64& rng, int depth) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  if (depth <= 0) {
    static const char* leaves[] = {"x", "2", "3/4", "sqrt2", "pi", "e", "0.5", "7", "phi"};
    return leaves[pick(9)];
  }
  const std::string a = random_expr(rng, depth - 1);
  const std::string b = random_expr(rng, depth - 1);
  switch (pick(10)) {
    case 0: return a + " + " + b;
    case 1: return a + " - " + b;
    case 2: return a + "*" + b;
    case 3: return "(" + a + ")/(" + b + " + 3)";
    case 4: return "(" + a + ")^(" + std::to_string(pick(5) + 1) + "/" + std::to_string(pick(3) + 1) + ")";
    case 5: return "exp(" + a + ")";
    case 6: return "log(" + a + ")";
    case 7: return "-" + a;
    case 8: {
      static const char* fns[] = {"gamma_ln", "zeta", "li", "sin_inv_log", "loglog", "polygamma_2", "zeta_d1"};
      return std::string(fns[pick(7)]) + "(" + a + ")";
    }
    default: return "(" + a + ")^(" + b + ")";
  }
}

// Evaluate at a high-precision point; the finite-difference oracle works on raw MPFR values.
double at(const HardyExpr& e, double x) {
  return eval_interval(e, Interval::from_q(mpq_class(x), 256), 256).mid_d();
}

}  // namespace

TEST_CASE("parse builds the expected trees") {
  CHECK(P("x^sqrt(2)") == power(var(), named(NamedId::Sqrt2)));
  CHECK(P("x*log(x)") == product({var(), log(var())}));
  CHECK(P("x^2 / loglog(x)") == quotient(power(var(), constant(2)), log(log(var()))));
  CHECK(P("1.25e2") == constant(125));
  CHECK(P("2.5e-1") == constant(mpq_class(1, 4)));
  CHECK(P("3/4") == constant(mpq_class(3, 4)));
  CHECK(P("polygamma_3(x)") == prim(PrimId::Polygamma, var(), 3));
}

TEST_CASE("parse errors carry the position") {
  try {
    parse("x + foo(x)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  try {
    parse("x * (x + 1");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 10);
  }
  CHECK_THROWS_AS(parse("x +"), ParseError);
  CHECK_THROWS_AS(parse("x / 0"), ParseError);
  CHECK_THROWS_AS(parse("y"), ParseError);
  CHECK_THROWS_AS(parse("x $ 2"), ValidationError);
}

TEST_CASE("printing then parsing is the identity on trees") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 2000; ++i) {
    const std::string s = random_expr(rng, 1 + static_cast<int>(i % 4));
    HardyExpr e = parse(s);
    INFO(s, " printed as ", to_string(e));
    CHECK(parse(to_string(e)) == e);
    HardyExpr c = simplify(e);
    INFO("simplified ", to_string(c));
    CHECK(parse(to_string(c)) == c);
  }
}

TEST_CASE("simplification is idempotent") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    HardyExpr e = parse(random_expr(rng, 3));
    HardyExpr once = simplify(e);
    INFO(to_string(e));
    CHECK(simplify(once) == once);
  }
}

TEST_CASE("simplification merges like terms and powers") {
  CHECK(simplify(P("x + x")) == simplify(P("2*x")));
  CHECK(simplify(P("x*x^(1/2)")) == simplify(P("x^(3/2)")));
  CHECK(simplify(P("log(exp(x))")) == var());
  CHECK(simplify(P("sqrt2*sqrt2")) == constant(2));
  CHECK(simplify(P("x - x")) == constant(0));
  CHECK(simplify(P("(x^2)^(1/2)")) == var());
}

TEST_CASE("derivatives of the basic examples") {
  CHECK(differentiate(P("x^(3/2)")) == simplify(P("3/2*x^(1/2)")));
  CHECK(differentiate(P("x*log(x)")) == simplify(P("log(x) + 1")));
  CHECK(differentiate(P("x^(3/2)"), 2) == simplify(P("3/4*x^(-1/2)")));
  CHECK(differentiate(P("x^2"), 3) == constant(0));
  HardyExpr a = P("x*log(x) + gamma_ln(x)");
  CHECK(differentiate(a, 0) == a);
}

TEST_CASE("second derivative matches central differences") {
  const char* corpus[] = {"x^(3/2)", "x*log(x)", "sqrt3*x^(5/2) + x*log(x)", "x^2/loglog(x)",
                          "gamma_ln(x+1)", "x^2*sin_inv_log(x)", "x^(1+1/x)*li(x)", "x^sqrt(2)"};
  for (const char* s : corpus) {
    HardyExpr a = P(s);
    for (int order = 1; order <= 2; ++order) {
      HardyExpr lower = differentiate(a, order - 1);
      HardyExpr d = differentiate(a, order);
      for (double x : {1e3, 1e6}) {
        const double h = x * 1e-5;
        const mpfr_prec_t p = 256;
        Interval xp = Interval::from_q(mpq_class(x + h), p), xm = Interval::from_q(mpq_class(x - h), p);
        Interval fd = (eval_interval(lower, xp, p) - eval_interval(lower, xm, p)) /
                      Interval::from_q(mpq_class(2 * h), p);
        const double want = fd.mid_d();
        const double got = at(d, x);
        INFO(s, " order ", order, " at ", x);
        CHECK(std::fabs(got - want) <= 1e-6 * std::fabs(want));
      }
    }
  }
}

TEST_CASE("differentiation composes and is linear") {
  std::mt19937_64 rng(5);
  const char* corpus[] = {"x^(3/2)", "x*log(x)", "gamma_ln(x)", "zeta(x)", "li(x)", "sin_inv_log(x)",
                          "exp(log(x)^(1/3))", "x^(1+1/x)", "polygamma_1(x)", "x^2/loglog(x)"};
  for (const char* s : corpus) {
    HardyExpr a = P(s);
    CHECK(differentiate(differentiate(a, 1), 1) == differentiate(a, 2));
    for (const char* t : corpus) {
      HardyExpr b = P(t);
      CHECK(differentiate(sum({a, b})) == simplify(sum({differentiate(a), differentiate(b)})));
    }
  }
}

TEST_CASE("exact evaluation of rational powers and logarithm ratios") {
  CHECK(exact_value(P("x^(3/2)"), 4) == mpq_class(8));
  CHECK(exact_value(P("log(x)/log(2)"), 8) == mpq_class(3));
  CHECK(!exact_value(P("x^(3/2)"), 2).has_value());
  CHECK(!exact_value(P("log(x)"), 2).has_value());
}

TEST_CASE("growth exponents of the examples") {
  struct Row {
    const char* expr;
    int k;
    GrowthClass cls;
  };
  const Row rows[] = {
      {"x^sqrt(2)", 1, GrowthClass::StrictlyBetween},
      {"x*log(x)", 1, GrowthClass::StrictlyBetween},
      {"sqrt3*x^(5/2) + x*log(x)", 2, GrowthClass::StrictlyBetween},
      {"x^2/loglog(x)", 1, GrowthClass::StrictlyBetween},
      {"(x^2008 + log(x)^(2/3))^(1/2) + x^2*exp(-log(x)^(1/3))", 1004, GrowthClass::ExactPowerObstruction},
      {"gamma_ln(x+1)", 1, GrowthClass::StrictlyBetween},
      {"gamma_ln(x^(3/2))", 1, GrowthClass::StrictlyBetween},
      {"x^2*sin_inv_log(x)", 1, GrowthClass::StrictlyBetween},
      {"x^(5/2)*zeta(x)", 2, GrowthClass::StrictlyBetween},
      {"x^(1+1/x)*li(x)", 1, GrowthClass::StrictlyBetween},
      {"x^2 + log(x)", 2, GrowthClass::ExactPowerObstruction},
      {"log(x)", 0, GrowthClass::StrictlyBetween},
      {"exp(x)", 0, GrowthClass::SuperPolynomial},
      {"3 + 1/x", 0, GrowthClass::Bounded},
  };
  for (const Row& r : rows) {
    INFO(r.expr);
    GrowthInfo g = growth_exponent(P(r.expr));
    CHECK(to_string(g.classification) == std::string(to_string(r.cls)));
    if (r.cls != GrowthClass::SuperPolynomial) CHECK(g.k == r.k);
  }
}

TEST_CASE("derivatives lower the growth exponent by one") {
  const char* rows[] = {"x^sqrt(2)", "x*log(x)", "sqrt3*x^(5/2) + x*log(x)", "x^2/loglog(x)",
                        "gamma_ln(x+1)", "gamma_ln(x^(3/2))", "x^2*sin_inv_log(x)",
                        "x^(5/2)*zeta(x)", "x^(1+1/x)*li(x)"};
  for (const char* s : rows) {
    INFO(s);
    HardyExpr a = P(s);
    GrowthInfo g = growth_exponent(a);
    REQUIRE(g.classification == GrowthClass::StrictlyBetween);
    REQUIRE(g.k >= 1);
    GrowthInfo d = growth_exponent(differentiate(a));
    CHECK(d.classification == GrowthClass::StrictlyBetween);
    CHECK(d.k == g.k - 1);
  }
}

TEST_CASE("compare_growth verdicts") {
  Comparison s = compare_growth(P("gamma_ln(x+1)"), P("x*log(x)"));
  CHECK(s.order == Order::Similar);
  CHECK(s.c == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(compare_growth(P("x"), P("x^2")).order == Order::Less);
  CHECK(compare_growth(P("x^2"), P("x")).order == Order::Greater);
  Comparison z = compare_growth(P("x^(5/2)*zeta(x)"), P("x^(5/2)"));
  CHECK(z.order == Order::Similar);
  CHECK(z.c == doctest::Approx(1.0).epsilon(1e-6));
  Comparison t = compare_growth(P("3*x^2 + x"), P("x^2"));
  CHECK(t.order == Order::Similar);
  CHECK(std::fabs(t.c - 3.0) <= t.c_error + 1e-9);
}

TEST_CASE("compare_growth is a total preorder on a corpus") {
  const char* corpus[] = {"log(x)", "x^(1/2)", "x", "2*x", "x*log(x)", "gamma_ln(x+1)", "x^sqrt(2)",
                          "x^(3/2)", "3*x^(3/2) + x", "x^2/loglog(x)", "x^2"};
  const int n = sizeof(corpus) / sizeof(corpus[0]);
  std::vector<HardyExpr> e;
  for (const char* s : corpus) e.push_back(P(s));
  std::vector<std::vector<Comparison>> c(n, std::vector<Comparison>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c[i][j] = compare_growth(e[i], e[j]);
  for (int i = 0; i < n; ++i) {
    CHECK(c[i][i].order == Order::Similar);
    for (int j = 0; j < n; ++j) {
      INFO(corpus[i], " vs ", corpus[j]);
      if (c[i][j].order == Order::Less) CHECK(c[j][i].order == Order::Greater);
      if (c[i][j].order == Order::Similar) CHECK(c[j][i].order == Order::Similar);
      for (int k = 0; k < n; ++k) {
        if (c[i][j].order == Order::Less && c[j][k].order != Order::Greater) CHECK(c[i][k].order == Order::Less);
        if (c[i][j].order == Order::Similar && c[j][k].order == Order::Similar) {
          const double prod = c[i][j].c * c[j][k].c;
          const double err = c[i][j].c_error * c[j][k].c + c[j][k].c_error * c[i][j].c + c[i][k].c_error + 1e-9;
          CHECK(std::fabs(c[i][k].c - prod) <= err);
        }
      }
    }
  }
}

TEST_CASE("eventual sign and thresholds") {
  SignInfo s = eventual_sign(P("log(x) - 10"));
  CHECK(s.sign == 1);
  CHECK(s.threshold == 22027);  // e^10 = 22026.47
  SignInfo t = eventual_sign(P("sin_inv_log(x)"));
  CHECK(t.sign == 1);
  CHECK(t.threshold >= 2);
  CHECK(eventual_sign(P("-x")).sign == -1);
}

TEST_CASE("basic growth properties on a grid") {
  std::vector<mpz_class> grid;
  for (int e = 2; e <= 8; ++e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, e);
    grid.push_back(p);
  }
  PropertyReport r = check_basic_properties(P("x^(3/2)"), 1, grid);
  for (const auto& c : r.checks) {
    INFO(c.name, " ", c.witness);
    CHECK(c.pass);
  }
  CHECK(check_basic_properties(P("x*log(x)"), 1, grid).all_pass());
  PropertyReport l = check_basic_properties(P("log(x)"), 0, grid);
  CHECK(l.all_pass());
  CHECK(l.cofinite_range);
  CHECK(!check_basic_properties(P("x^(3/2)"), 1, grid).cofinite_range);
}
