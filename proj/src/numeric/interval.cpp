#include "hardyrec/numeric/interval.hpp"

#include <algorithm>

#include "hardyrec/error.hpp"

namespace hr {

namespace {

mpfr_prec_t pmax(const Interval& a, const Interval& b) { return std::max(a.prec(), b.prec()); }

void check(const Interval& r) {
  if (mpfr_nan_p(r.lo().get()) || mpfr_nan_p(r.hi().get())) throw DomainError("interval result is NaN");
  if (mpfr_inf_p(r.lo().get()) || mpfr_inf_p(r.hi().get())) throw OverflowError("interval overflow");
}

void set_min(BigFloat& dst, const BigFloat& v) {
  if (mpfr_cmp(v.get(), dst.get()) < 0) mpfr_set(dst.get(), v.get(), MPFR_RNDD);
}
void set_max(BigFloat& dst, const BigFloat& v) {
  if (mpfr_cmp(v.get(), dst.get()) > 0) mpfr_set(dst.get(), v.get(), MPFR_RNDU);
}

}  // namespace

Interval::Interval(const BigFloat& lo, const BigFloat& hi) : lo_(lo), hi_(hi) {}

Interval Interval::from_si(long v, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_si(r.lo_.get(), v, MPFR_RNDD);
  mpfr_set_si(r.hi_.get(), v, MPFR_RNDU);
  return r;
}

Interval Interval::from_z(const mpz_class& v, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_z(r.lo_.get(), v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_.get(), v.get_mpz_t(), MPFR_RNDU);
  return r;
}

Interval Interval::from_q(const mpq_class& v, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_q(r.lo_.get(), v.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_.get(), v.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::from_point(const BigFloat& v, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set(r.lo_.get(), v.get(), MPFR_RNDD);
  mpfr_set(r.hi_.get(), v.get(), MPFR_RNDU);
  return r;
}

Interval Interval::hull(const Interval& a, const Interval& b) {
  Interval r(pmax(a, b));
  mpfr_min(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_max(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
  return r;
}

bool Interval::contains(const Interval& o) const {
  return mpfr_lessequal_p(lo_.get(), o.lo_.get()) && mpfr_lessequal_p(o.hi_.get(), hi_.get());
}

BigFloat Interval::mid() const {
  BigFloat m(prec() + 1);
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m;
}

BigFloat Interval::rad() const {
  BigFloat m = mid();
  BigFloat a(prec()), b(prec());
  mpfr_sub(a.get(), m.get(), lo_.get(), MPFR_RNDU);
  mpfr_sub(b.get(), hi_.get(), m.get(), MPFR_RNDU);
  if (mpfr_cmp(a.get(), b.get()) < 0) return b;
  return a;
}

BigFloat Interval::width() const {
  BigFloat w(prec());
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return w;
}

Interval Interval::operator-() const {
  Interval r(prec());
  mpfr_neg(r.lo_.get(), hi_.get(), MPFR_RNDD);
  mpfr_neg(r.hi_.get(), lo_.get(), MPFR_RNDU);
  return r;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(pmax(a, b));
  mpfr_add(r.lo().get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
  mpfr_add(r.hi().get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
  check(r);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r(pmax(a, b));
  mpfr_sub(r.lo().get(), a.lo().get(), b.hi().get(), MPFR_RNDD);
  mpfr_sub(r.hi().get(), a.hi().get(), b.lo().get(), MPFR_RNDU);
  check(r);
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  const mpfr_prec_t p = pmax(a, b);
  Interval r(p);
  BigFloat t(p);
  bool first = true;
  for (const BigFloat* x : {&a.lo(), &a.hi()}) {
    for (const BigFloat* y : {&b.lo(), &b.hi()}) {
      mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDD);
      if (first) mpfr_set(r.lo().get(), t.get(), MPFR_RNDD); else set_min(r.lo(), t);
      mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDU);
      if (first) mpfr_set(r.hi().get(), t.get(), MPFR_RNDU); else set_max(r.hi(), t);
      first = false;
    }
  }
  check(r);
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) {
    if (b.lo().is_zero() && b.hi().is_zero()) throw DomainError("division by zero");
    throw NeedsPrecision("divisor interval contains zero");
  }
  const mpfr_prec_t p = pmax(a, b);
  Interval r(p);
  BigFloat t(p);
  bool first = true;
  for (const BigFloat* x : {&a.lo(), &a.hi()}) {
    for (const BigFloat* y : {&b.lo(), &b.hi()}) {
      mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDD);
      if (first) mpfr_set(r.lo().get(), t.get(), MPFR_RNDD); else set_min(r.lo(), t);
      mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDU);
      if (first) mpfr_set(r.hi().get(), t.get(), MPFR_RNDU); else set_max(r.hi(), t);
      first = false;
    }
  }
  check(r);
  return r;
}

Interval operator*(const Interval& a, long s) { return a * Interval::from_si(s, a.prec()); }
Interval operator+(const Interval& a, long s) { return a + Interval::from_si(s, a.prec()); }

Interval abs(const Interval& a) {
  if (a.lo().sign() >= 0) return a;
  if (a.hi().sign() <= 0) return -a;
  Interval r(a.prec());
  mpfr_set_zero(r.lo().get(), 1);
  BigFloat nl(a.prec());
  mpfr_neg(nl.get(), a.lo().get(), MPFR_RNDU);
  mpfr_max(r.hi().get(), nl.get(), a.hi().get(), MPFR_RNDU);
  return r;
}

Interval sqr(const Interval& a) { return pow_z(a, 2); }

Interval sqrt(const Interval& a) {
  if (a.hi().sign() < 0) throw DomainError("sqrt of negative value");
  if (a.lo().sign() < 0) throw NeedsPrecision("sqrt argument straddles zero");
  Interval r(a.prec());
  mpfr_sqrt(r.lo().get(), a.lo().get(), MPFR_RNDD);
  mpfr_sqrt(r.hi().get(), a.hi().get(), MPFR_RNDU);
  return r;
}

Interval exp(const Interval& a) {
  Interval r(a.prec());
  mpfr_exp(r.lo().get(), a.lo().get(), MPFR_RNDD);
  mpfr_exp(r.hi().get(), a.hi().get(), MPFR_RNDU);
  check(r);
  return r;
}

Interval log(const Interval& a) {
  if (a.hi().sign() <= 0) throw DomainError("log of non-positive value");
  if (a.lo().sign() <= 0) throw NeedsPrecision("log argument straddles zero");
  Interval r(a.prec());
  mpfr_log(r.lo().get(), a.lo().get(), MPFR_RNDD);
  mpfr_log(r.hi().get(), a.hi().get(), MPFR_RNDU);
  check(r);
  return r;
}

namespace {

// True when (a - shift) / (2*pi) may cross an integer over the interval, i.e.
// the interval may contain a point shift + 2*pi*j.
bool may_contain_phase(const Interval& a, const Interval& shift) {
  const mpfr_prec_t p = a.prec() + 16;
  Interval two_pi = interval_pi(p) * 2;
  Interval t = (a - shift) / two_pi;
  mpz_class fl, fh;
  mpfr_get_z(fl.get_mpz_t(), t.lo().get(), MPFR_RNDD);
  mpfr_get_z(fh.get_mpz_t(), t.hi().get(), MPFR_RNDD);
  if (fl != fh) return true;
  return mpfr_integer_p(t.lo().get()) != 0;
}

}  // namespace

Interval sin(const Interval& a) {
  const mpfr_prec_t p = a.prec();
  Interval r(p);
  BigFloat w = a.width();
  if (mpfr_cmp_ui(w.get(), 7) >= 0) {
    mpfr_set_si(r.lo().get(), -1, MPFR_RNDD);
    mpfr_set_si(r.hi().get(), 1, MPFR_RNDU);
    return r;
  }
  BigFloat t(p);
  mpfr_sin(r.lo().get(), a.lo().get(), MPFR_RNDD);
  mpfr_sin(t.get(), a.hi().get(), MPFR_RNDD);
  set_min(r.lo(), t);
  mpfr_sin(r.hi().get(), a.lo().get(), MPFR_RNDU);
  mpfr_sin(t.get(), a.hi().get(), MPFR_RNDU);
  set_max(r.hi(), t);
  Interval half_pi = interval_pi(p + 16);
  mpfr_div_2ui(half_pi.lo().get(), half_pi.lo().get(), 1, MPFR_RNDD);
  mpfr_div_2ui(half_pi.hi().get(), half_pi.hi().get(), 1, MPFR_RNDU);
  if (may_contain_phase(a, half_pi)) mpfr_set_si(r.hi().get(), 1, MPFR_RNDU);
  if (may_contain_phase(a, -half_pi)) mpfr_set_si(r.lo().get(), -1, MPFR_RNDD);
  return r;
}

Interval cos(const Interval& a) {
  Interval half_pi = interval_pi(a.prec() + 16);
  mpfr_div_2ui(half_pi.lo().get(), half_pi.lo().get(), 1, MPFR_RNDD);
  mpfr_div_2ui(half_pi.hi().get(), half_pi.hi().get(), 1, MPFR_RNDU);
  Interval s = sin(a + half_pi);
  Interval r(a.prec());
  mpfr_set(r.lo().get(), s.lo().get(), MPFR_RNDD);
  mpfr_set(r.hi().get(), s.hi().get(), MPFR_RNDU);
  return r;
}

Interval pow_z(const Interval& base, const mpz_class& e) {
  const mpfr_prec_t p = base.prec();
  if (e < 0) {
    Interval one = Interval::from_si(1, p);
    return one / pow_z(base, -e);
  }
  if (e == 0) return Interval::from_si(1, p);
  Interval r(p);
  const bool even = mpz_even_p(e.get_mpz_t());
  if (!even || base.lo().sign() >= 0) {
    mpfr_pow_z(r.lo().get(), base.lo().get(), e.get_mpz_t(), MPFR_RNDD);
    mpfr_pow_z(r.hi().get(), base.hi().get(), e.get_mpz_t(), MPFR_RNDU);
  } else if (base.hi().sign() <= 0) {
    mpfr_pow_z(r.lo().get(), base.hi().get(), e.get_mpz_t(), MPFR_RNDD);
    mpfr_pow_z(r.hi().get(), base.lo().get(), e.get_mpz_t(), MPFR_RNDU);
  } else {
    Interval m = abs(base);
    mpfr_set_zero(r.lo().get(), 1);
    mpfr_pow_z(r.hi().get(), m.hi().get(), e.get_mpz_t(), MPFR_RNDU);
  }
  check(r);
  return r;
}

Interval pow(const Interval& base, const Interval& expo) {
  const mpfr_prec_t p = pmax(base, expo);
  if (expo.is_point() && mpfr_integer_p(expo.lo().get())) {
    mpz_class e;
    mpfr_get_z(e.get_mpz_t(), expo.lo().get(), MPFR_RNDN);
    return pow_z(base, e);
  }
  if (base.hi().sign() < 0) throw DomainError("real power of negative base");
  if (base.lo().sign() < 0) throw NeedsPrecision("power base straddles zero");
  if (base.lo().sign() == 0 && expo.lo().sign() <= 0) {
    if (base.hi().sign() == 0) throw DomainError("zero to a non-positive power");
    throw NeedsPrecision("power base touches zero");
  }
  Interval r(p);
  BigFloat t(p);
  bool first = true;
  for (const BigFloat* x : {&base.lo(), &base.hi()}) {
    for (const BigFloat* y : {&expo.lo(), &expo.hi()}) {
      mpfr_pow(t.get(), x->get(), y->get(), MPFR_RNDD);
      if (first) mpfr_set(r.lo().get(), t.get(), MPFR_RNDD); else set_min(r.lo(), t);
      mpfr_pow(t.get(), x->get(), y->get(), MPFR_RNDU);
      if (first) mpfr_set(r.hi().get(), t.get(), MPFR_RNDU); else set_max(r.hi(), t);
      first = false;
    }
  }
  check(r);
  return r;
}

Interval floor_mod1(const Interval& a, mpz_class* floor_out) {
  mpz_class fl, fh;
  mpfr_get_z(fl.get_mpz_t(), a.lo().get(), MPFR_RNDD);
  mpfr_get_z(fh.get_mpz_t(), a.hi().get(), MPFR_RNDD);
  if (fl != fh) throw NeedsPrecision("interval contains an integer");
  Interval r(a.prec());
  mpfr_sub_z(r.lo().get(), a.lo().get(), fl.get_mpz_t(), MPFR_RNDD);
  mpfr_sub_z(r.hi().get(), a.hi().get(), fl.get_mpz_t(), MPFR_RNDU);
  if (r.lo().sign() < 0) mpfr_set_zero(r.lo().get(), 1);
  if (floor_out) *floor_out = fl;
  return r;
}

Interval interval_pi(mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_const_pi(r.lo().get(), MPFR_RNDD);
  mpfr_const_pi(r.hi().get(), MPFR_RNDU);
  return r;
}

Interval interval_e(mpfr_prec_t prec) {
  return exp(Interval::from_si(1, prec));
}

long magnitude_bits(const Interval& a) {
  long e = 0;
  for (const BigFloat* v : {&a.lo(), &a.hi()}) {
    if (mpfr_regular_p(v->get())) e = std::max<long>(e, mpfr_get_exp(v->get()));
  }
  return e;
}

}  // namespace hr
