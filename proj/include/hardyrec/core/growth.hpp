#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "hardyrec/core/expr.hpp"

namespace hr {

// c * x^p * (log x)^q * (log log x)^r, the leading asymptotic term.
struct Monomial {
  double c = 0.0;
  double p = 0.0;
  bool p_rational = true;  // p is exactly p_q
  mpq_class p_q = 0;
  mpq_class q = 0;
  mpq_class r = 0;
};

// Leading monomial when the expression is built from LE operations and the
// registered primitives in a way the expansion rules cover; nullopt otherwise.
std::optional<Monomial> leading_monomial(const HardyExpr& e);

enum class GrowthClass { StrictlyBetween, ExactPowerObstruction, SuperPolynomial, Bounded };
const char* to_string(GrowthClass c);

struct GrowthInfo {
  int k = 0;
  GrowthClass classification = GrowthClass::Bounded;
  int sign = 1;
  mpz_class threshold = 1;
  bool symbolic = false;  // the symbolic track was available and agreed
  double obstruction_c = 0.0;  // c in c x^k for obstructions
};

struct SignInfo {
  int sign = 1;
  mpz_class threshold = 1;
};

SignInfo eventual_sign(const HardyExpr& a);

GrowthInfo growth_exponent(const HardyExpr& a, int cap = 4096);

enum class Order { Less, Similar, Greater };
struct Comparison {
  Order order = Order::Similar;
  double c = 0.0;          // lim a/b when order == Similar
  double c_error = 0.0;    // error bar on c
  bool symbolic = false;
};
const char* to_string(Order o);

Comparison compare_growth(const HardyExpr& a, const HardyExpr& b);

struct PropertyCheck {
  std::string name;
  bool pass = false;
  std::string witness;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;
  bool cofinite_range = false;
  bool all_pass() const;
};

// The four growth properties of a function with x^k < a < x^{k+1}, checked on a grid.
PropertyReport check_basic_properties(const HardyExpr& a, int k, const std::vector<mpz_class>& grid);

}  // namespace hr
