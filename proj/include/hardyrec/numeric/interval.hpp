#pragma once

#include <gmpxx.h>

#include "hardyrec/numeric/bigfloat.hpp"

namespace hr {

// Closed interval [lo, hi] with outward-rounded MPFR endpoints.
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec = 64) : lo_(prec), hi_(prec) {}
  Interval(const BigFloat& lo, const BigFloat& hi);

  static Interval from_si(long v, mpfr_prec_t prec);
  static Interval from_z(const mpz_class& v, mpfr_prec_t prec);
  static Interval from_q(const mpq_class& v, mpfr_prec_t prec);
  static Interval from_point(const BigFloat& v, mpfr_prec_t prec);
  static Interval hull(const Interval& a, const Interval& b);

  const BigFloat& lo() const { return lo_; }
  const BigFloat& hi() const { return hi_; }
  BigFloat& lo() { return lo_; }
  BigFloat& hi() { return hi_; }
  mpfr_prec_t prec() const { return lo_.prec(); }

  bool is_point() const { return mpfr_equal_p(lo_.get(), hi_.get()) != 0; }
  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  bool positive() const { return lo_.sign() > 0; }
  bool negative() const { return hi_.sign() < 0; }
  bool contains(const Interval& o) const;
  bool is_finite() const { return mpfr_number_p(lo_.get()) && mpfr_number_p(hi_.get()); }

  BigFloat mid() const;
  BigFloat rad() const;  // rounded up, so [mid-rad, mid+rad] covers the interval
  BigFloat width() const;
  double mid_d() const { return mid().to_double(); }

  Interval operator-() const;

 private:
  BigFloat lo_, hi_;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, long s);
Interval operator+(const Interval& a, long s);

Interval abs(const Interval& a);
Interval sqr(const Interval& a);
Interval sqrt(const Interval& a);
Interval exp(const Interval& a);
Interval log(const Interval& a);
Interval sin(const Interval& a);
Interval cos(const Interval& a);
Interval pow(const Interval& base, const Interval& expo);
Interval pow_z(const Interval& base, const mpz_class& e);
Interval floor_mod1(const Interval& a, mpz_class* floor_out);

Interval interval_pi(mpfr_prec_t prec);
Interval interval_e(mpfr_prec_t prec);

// Bits of magnitude: max(0, exponent of the larger endpoint).
long magnitude_bits(const Interval& a);

}  // namespace hr
