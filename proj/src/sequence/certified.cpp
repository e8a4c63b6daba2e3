#include "hardyrec/sequence/certified.hpp"

#include <algorithm>
#include <set>

#include "hardyrec/core/evaluate.hpp"
#include "hardyrec/error.hpp"

namespace hr {

std::string CertifiedReal::to_string(int digits) const {
  return iv_.mid().to_string(digits) + " +/- " + iv_.rad().to_string(3);
}

namespace {

bool radius_ok(const Interval& v, int precision) {
  BigFloat bound(v.prec());
  BigFloat m = v.mid();
  mpfr_abs(bound.get(), m.get(), MPFR_RNDD);
  if (mpfr_cmp_ui(bound.get(), 1) < 0) mpfr_set_ui(bound.get(), 1, MPFR_RNDD);
  mpfr_mul_2si(bound.get(), bound.get(), -precision / 2, MPFR_RNDD);
  BigFloat r = v.rad();
  return mpfr_cmp(r.get(), bound.get()) <= 0;
}

}  // namespace

CertifiedReal eval(const HardyExpr& a, const mpq_class& x, int precision) {
  if (precision < 2) throw PreconditionError("precision must be at least 2 bits");
  long wp = precision + 32;
  for (;;) {
    if (wp > kPrecisionCap + 64) {
      throw PrecisionCapExceeded("evaluation needs more than " + std::to_string(kPrecisionCap) + " bits");
    }
    const auto p = static_cast<mpfr_prec_t>(wp);
    try {
      Interval v = eval_interval(a, Interval::from_q(x, p), p);
      if (radius_ok(v, precision)) return CertifiedReal(std::move(v));
    } catch (const NeedsPrecision&) {
    }
    wp *= 2;
  }
}

CertifiedReal eval_at(const HardyExpr& a, const mpz_class& n, int precision) {
  return eval(a, mpq_class(n), precision);
}

FloorResult floor_eval(const HardyExpr& a, const mpz_class& n, int min_bits) {
  FloorResult out;
  out.n = n;
  long p = std::max(64, min_bits);
  bool sized = min_bits > 0;
  bool tried_exact = false;
  const std::size_t nbits = mpz_sizeinbase(n.get_mpz_t(), 2);
  p = std::max<long>(p, static_cast<long>(nbits) + 32);
  for (;;) {
    if (p > kPrecisionCap) {
      throw FloorAmbiguity(n.get_str(), kPrecisionCap);
    }
    const auto prec = static_cast<mpfr_prec_t>(p);
    bool ambiguous = true;
    try {
      Interval v = eval_interval(a, Interval::from_z(n, prec), prec);
      if (!v.is_finite()) throw OverflowError("non-finite value");
      if (!sized) {
        sized = true;
        const long need = std::max<long>(64, magnitude_bits(v) + 64);
        if (need > p) {
          p = std::min<long>(need, kPrecisionCap);
          continue;
        }
      }
      mpz_class fl;
      Interval frac = floor_mod1(v, &fl);
      out.floor = fl;
      out.frac = CertifiedReal(std::move(frac));
      out.bits = static_cast<int>(p);
      out.exact = v.is_point();
      ambiguous = false;
    } catch (const NeedsPrecision&) {
    }
    if (!ambiguous) return out;
    if (!tried_exact) {
      tried_exact = true;
      if (auto q = exact_value(a, mpq_class(n))) {
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), q->get_num_mpz_t(), q->get_den_mpz_t());
        out.floor = fl;
        out.frac = CertifiedReal(Interval::from_q(*q - mpq_class(fl), 128));
        out.bits = static_cast<int>(p);
        out.exact = true;
        return out;
      }
    }
    p *= 2;
  }
}

CertifiedReal deriv_eval(const HardyExpr& a, int i, const mpz_class& n, int precision) {
  return eval(differentiate(a, i), mpq_class(n), precision);
}

std::vector<mpz_class> range_enumerate(const HardyExpr& a, const mpz_class& n_lo, const mpz_class& n_hi) {
  if (n_lo > n_hi) throw PreconditionError("range_enumerate needs n_lo <= n_hi");
  std::set<mpz_class> vals;
  for (mpz_class n = n_lo; n <= n_hi; ++n) vals.insert(floor_eval(a, n).floor);
  return {vals.begin(), vals.end()};
}

mpz_class validity_threshold(const HardyExpr& a) {
  auto ok = [&](const mpz_class& x) {
    try {
      eval(a, mpq_class(x), 64);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  // Largest failing sample among powers of two decides the half line.
  int last_bad = -1;
  for (int j = 0; j <= 64; ++j) {
    if (!ok(mpz_class(1) << j)) last_bad = j;
  }
  if (last_bad == 64) throw DomainError("expression not evaluable on sampled half line");
  if (last_bad < 0) return 1;
  mpz_class lo = mpz_class(1) << last_bad;        // fails
  mpz_class hi = mpz_class(1) << (last_bad + 1);  // succeeds
  while (hi - lo > 1) {
    mpz_class mid = (lo + hi) / 2;
    if (ok(mid)) hi = mid; else lo = mid;
  }
  return hi;
}

}  // namespace hr
