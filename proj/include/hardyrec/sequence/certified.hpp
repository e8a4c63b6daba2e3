#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "hardyrec/core/expr.hpp"
#include "hardyrec/numeric/interval.hpp"

namespace hr {

inline constexpr int kPrecisionCap = 4096;

// A real number known to lie in [midpoint - radius, midpoint + radius].
class CertifiedReal {
 public:
  CertifiedReal() = default;
  explicit CertifiedReal(Interval iv) : iv_(std::move(iv)) {}

  const Interval& enclosure() const { return iv_; }
  BigFloat midpoint() const { return iv_.mid(); }
  BigFloat radius() const { return iv_.rad(); }
  double to_double() const { return iv_.mid_d(); }
  double radius_d() const { return iv_.rad().to_double(MPFR_RNDU); }
  bool contains(const CertifiedReal& o) const { return iv_.contains(o.iv_); }
  std::string to_string(int digits = 20) const;

 private:
  Interval iv_;
};

struct FloorResult {
  mpz_class n;
  mpz_class floor;
  CertifiedReal frac;
  int bits = 0;
  bool exact = false;  // a(n) known exactly (point enclosure or the rational evaluator)
};

// Radius <= 2^{-precision/2} max(1, |midpoint|), escalating the working precision up to the cap.
CertifiedReal eval(const HardyExpr& a, const mpq_class& x, int precision = 64);
CertifiedReal eval_at(const HardyExpr& a, const mpz_class& n, int precision = 64);

// Certified integer and fractional part of a(n).  min_bits forces a starting precision.
FloorResult floor_eval(const HardyExpr& a, const mpz_class& n, int min_bits = 0);

CertifiedReal deriv_eval(const HardyExpr& a, int i, const mpz_class& n, int precision = 128);

// {[a(n)] : n_lo <= n <= n_hi}, ascending and deduplicated.
std::vector<mpz_class> range_enumerate(const HardyExpr& a, const mpz_class& n_lo, const mpz_class& n_hi);

// Smallest positive integer u (found by doubling then bisection) such that a is
// evaluable at u and at every sampled point 2^j >= u up to 2^64.
mpz_class validity_threshold(const HardyExpr& a);

}  // namespace hr
