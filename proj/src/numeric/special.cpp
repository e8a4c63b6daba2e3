#include "hardyrec/numeric/special.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <vector>

#include "hardyrec/error.hpp"

namespace hr {

namespace {

constexpr int kBernoulliCount = 160;

std::vector<mpq_class> compute_bernoulli_even() {
  // Akiyama-Tanigawa gives B_n with B_1 = +1/2; only even indices are kept.
  const int n_max = 2 * (kBernoulliCount - 1);
  std::vector<mpq_class> a(n_max + 1);
  std::vector<mpq_class> out;
  out.reserve(kBernoulliCount);
  for (int m = 0; m <= n_max; ++m) {
    a[m] = mpq_class(1, m + 1);
    for (int j = m; j >= 1; --j) {
      a[j - 1] = j * (a[j - 1] - a[j]);
      a[j - 1].canonicalize();
    }
    if (m % 2 == 0) out.push_back(a[0]);
  }
  return out;
}

// Interval of the point v at precision p.
Interval pt(const BigFloat& v, mpfr_prec_t p) { return Interval::from_point(v, p); }

// Enclosure of psi^{(k)}(x0) for k >= 1 and a point x0 > 0.
Interval polygamma_point(int k, const BigFloat& x0, mpfr_prec_t p) {
  const mpfr_prec_t wp = p + 32;
  Interval x = pt(x0, wp);
  // Shift far enough that ~150 series terms reach 2^-p.
  const double j_max = 150.0;
  const double target = std::max(static_cast<double>(p) / 4.0 + k + 8.0,
                                 2.0 * j_max * std::exp2(static_cast<double>(p) / (2.0 * j_max)) /
                                         (2.0 * M_PI * M_E) + k);
  long shift = 0;
  const double xd = x0.to_double();
  if (xd < target) shift = static_cast<long>(target - xd) + 1;

  mpz_class kfact;
  mpz_fac_ui(kfact.get_mpz_t(), static_cast<unsigned long>(k));
  const long sgn_rec = (k % 2 == 0) ? 1 : -1;  // (-1)^k

  // psi^{(k)}(x) = psi^{(k)}(x+N) - (-1)^k k! sum_{j<N} (x+j)^{-k-1}
  Interval acc = Interval::from_si(0, wp);
  for (long j = 0; j < shift; ++j) {
    acc = acc + pow_z(x + j, mpz_class(-(k + 1)));
  }
  acc = acc * Interval::from_z(kfact, wp) * sgn_rec;

  Interval X = x + shift;
  // Asymptotic series: (-1)^{k+1} [ (k-1)!/X^k + k!/(2X^{k+1}) + sum_j B_2j (2j+k-1)!/((2j)! X^{2j+k}) ]
  mpz_class km1fact;
  mpz_fac_ui(km1fact.get_mpz_t(), static_cast<unsigned long>(k - 1));
  Interval series = Interval::from_z(km1fact, wp) / pow_z(X, mpz_class(k));
  series = series + Interval::from_z(kfact, wp) / (pow_z(X, mpz_class(k + 1)) * 2);
  Interval lead = series;
  Interval last_term(wp);
  BigFloat tol(wp);
  mpfr_set(tol.get(), abs(lead).lo().get(), MPFR_RNDD);
  mpfr_mul_2si(tol.get(), tol.get(), -static_cast<long>(p) - 16, MPFR_RNDD);
  Interval remainder(wp);
  bool done = false;
  for (int j = 1; j < kBernoulliCount; ++j) {
    mpz_class num, den;
    mpz_fac_ui(num.get_mpz_t(), static_cast<unsigned long>(2 * j + k - 1));
    mpz_fac_ui(den.get_mpz_t(), static_cast<unsigned long>(2 * j));
    mpq_class c = bernoulli_even(j) * mpq_class(num, den);
    c.canonicalize();
    Interval term = Interval::from_q(c, wp) / pow_z(X, mpz_class(2 * j + k));
    if (j > 1 && mpfr_cmp(abs(term).hi().get(), tol.get()) < 0) {
      // Envelope: the remainder is bounded by the first omitted term; doubled for margin.
      Interval a = abs(term) * 2;
      mpfr_neg(remainder.lo().get(), a.hi().get(), MPFR_RNDD);
      mpfr_set(remainder.hi().get(), a.hi().get(), MPFR_RNDU);
      done = true;
      break;
    }
    series = series + term;
  }
  if (!done) throw PrecisionCapExceeded("polygamma asymptotic series did not converge");
  series = series + remainder;
  Interval asym = (k % 2 == 1) ? series : -series;  // (-1)^{k+1}
  return asym - acc;
}

// Integral of (log t)^i t^{-sig-1} over [N, inf) given L = log N:
// e^{-sig L} sum_u i!/(i-u)! L^{i-u} / sig^{u+1}.
Interval log_power_tail(int i, const Interval& L, const Interval& sig) {
  const mpfr_prec_t wp = L.prec();
  Interval acc = Interval::from_si(0, wp);
  mpz_class ratio = 1;
  for (int u = 0; u <= i; ++u) {
    if (u > 0) ratio *= (i - u + 1);
    acc = acc + Interval::from_z(ratio, wp) * pow_z(L, mpz_class(i - u)) / pow_z(sig, mpz_class(u + 1));
  }
  return acc * exp(-(sig * L));
}

// Enclosure of sum_{n>=2} (log n)^j n^{-s0} for a point s0 > 1 and j >= 1.
// Direct sum below N, Euler-Maclaurin from N on with the remainder bounded by
// 4 (2 pi)^{-2q} times the integral of |f^{(2q)}|.
Interval zeta_tail_sum(int j, const BigFloat& s0, mpfr_prec_t p) {
  const mpfr_prec_t wp = p + 32;
  Interval s = pt(s0, wp);
  if (!(s0.to_double() > 1.0)) throw DomainError("zeta derivative needs s > 1");
  {
    // Past the exponent range every term underflows; f is decreasing from 2 on once
    // s >= j/log 2, so the sum is at most f(2) plus the integral from 2.
    Interval L2 = log(Interval::from_si(2, wp));
    Interval f2 = pow_z(L2, mpz_class(j)) * exp(-(s * L2));
    if (f2.lo().is_zero() && s0.to_double() >= 2.0 * j) {
      Interval r(wp);
      Interval up = f2 + log_power_tail(j, L2, s - Interval::from_si(1, wp));
      mpfr_set(r.hi().get(), up.hi().get(), MPFR_RNDU);
      return r;
    }
  }
  Interval two_pi = interval_pi(wp) * 2;
  Interval sum = Interval::from_si(0, wp);
  long next = 2;
  long N = std::max<long>(16, static_cast<long>(p) / 8);
  while (N <= 1L << 24) {
    for (; next < N; ++next) {
      Interval ln = log(Interval::from_si(next, wp));
      sum = sum + pow_z(ln, mpz_class(j)) * exp(-(s * ln));
    }
    if (sum.lo().is_zero() && sum.hi().is_zero()) return sum;
    Interval L = log(Interval::from_si(N, wp));
    Interval inv_n = Interval::from_si(1, wp) / Interval::from_si(N, wp);
    Interval fN = pow_z(L, mpz_class(j)) * exp(-(s * L));
    Interval tail = log_power_tail(j, L, s - Interval::from_si(1, wp)) + fN / Interval::from_si(2, wp);

    BigFloat tol(wp);
    mpfr_mul_2si(tol.get(), sum.lo().get(), -static_cast<long>(p) - 8, MPFR_RNDD);

    // f^{(m)}(t) = t^{-s-m} P_m(log t), P_{m+1} = -(s+m) P_m + P_m'.
    std::vector<Interval> poly(static_cast<std::size_t>(j) + 1, Interval::from_si(0, wp));
    poly[static_cast<std::size_t>(j)] = Interval::from_si(1, wp);
    auto advance = [&](long m) {
      std::vector<Interval> nxt(poly.size(), Interval::from_si(0, wp));
      Interval sm = s + m;
      for (std::size_t i = 0; i < poly.size(); ++i) {
        nxt[i] = -(sm * poly[i]);
        if (i + 1 < poly.size()) nxt[i] = nxt[i] + poly[i + 1] * static_cast<long>(i + 1);
      }
      poly = std::move(nxt);
    };
    auto eval_poly = [&](const Interval& l) {
      Interval acc = Interval::from_si(0, wp);
      for (std::size_t i = poly.size(); i-- > 0;) acc = acc * l + poly[i];
      return acc;
    };
    Interval scale = exp(-(s * L));  // N^{-s}
    long m = 0;
    for (int q = 1; q < kBernoulliCount; ++q) {
      while (m < 2 * q - 1) {
        advance(m++);
        scale = scale * inv_n;
      }
      mpz_class fact;
      mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(2 * q));
      mpq_class c = bernoulli_even(q) / mpq_class(fact);
      tail = tail - Interval::from_q(c, wp) * scale * eval_poly(L);
      advance(m++);  // now P_{2q}
      // Remainder: 4 (2pi)^{-2q} sum_i |c_i| int_N^inf (log t)^i t^{-s-2q} dt.
      Interval bound = Interval::from_si(0, wp);
      Interval sig = s + (2 * q - 1);
      for (std::size_t i = 0; i < poly.size(); ++i) {
        Interval a = abs(poly[i]);
        Interval ab(wp);
        mpfr_set(ab.lo().get(), a.hi().get(), MPFR_RNDD);
        mpfr_set(ab.hi().get(), a.hi().get(), MPFR_RNDU);
        bound = bound + ab * log_power_tail(static_cast<int>(i), L, sig);
      }
      bound = bound * 4 / pow_z(two_pi, mpz_class(2 * q));
      if (mpfr_cmp(bound.hi().get(), tol.get()) <= 0) {
        Interval r = sum + tail;
        mpfr_sub(r.lo().get(), r.lo().get(), bound.hi().get(), MPFR_RNDD);
        mpfr_add(r.hi().get(), r.hi().get(), bound.hi().get(), MPFR_RNDU);
        return r;
      }
      // poly now holds P_{2q}; bring scale to N^{-s-2q} to match.
      scale = scale * inv_n;
      m = 2 * q;
    }
    N *= 4;
  }
  throw PrecisionCapExceeded("zeta derivative tail");
}

}  // namespace

const mpq_class& bernoulli_even(int j) {
  static std::once_flag once;
  static std::vector<mpq_class> table;
  std::call_once(once, [] { table = compute_bernoulli_even(); });
  if (j < 0 || j >= static_cast<int>(table.size())) throw DomainError("Bernoulli index out of range");
  return table[static_cast<std::size_t>(j)];
}

Interval lngamma(const Interval& x) {
  if (x.hi().sign() <= 0) throw DomainError("lngamma needs positive argument");
  if (x.lo().sign() <= 0) throw NeedsPrecision("lngamma argument touches zero");
  const mpfr_prec_t p = x.prec();
  Interval r(p);
  BigFloat t(p);
  // Convex with minimum near 1.4616; bounds from endpoints and the minimum value.
  mpfr_lngamma(r.lo().get(), x.lo().get(), MPFR_RNDD);
  mpfr_lngamma(t.get(), x.hi().get(), MPFR_RNDD);
  if (mpfr_cmp(t.get(), r.lo().get()) < 0) mpfr_set(r.lo().get(), t.get(), MPFR_RNDD);
  mpfr_lngamma(r.hi().get(), x.lo().get(), MPFR_RNDU);
  mpfr_lngamma(t.get(), x.hi().get(), MPFR_RNDU);
  if (mpfr_cmp(t.get(), r.hi().get()) > 0) mpfr_set(r.hi().get(), t.get(), MPFR_RNDU);
  if (mpfr_cmp_d(x.lo().get(), 1.47) < 0 && mpfr_cmp_d(x.hi().get(), 1.46) > 0) {
    mpfr_set_d(r.lo().get(), -0.1215, MPFR_RNDD);
  }
  return r;
}

Interval polygamma(int k, const Interval& x) {
  if (x.hi().sign() <= 0) throw DomainError("polygamma needs positive argument");
  if (x.lo().sign() <= 0) throw NeedsPrecision("polygamma argument touches zero");
  const mpfr_prec_t p = x.prec();
  if (k == 0) {
    Interval r(p);
    mpfr_digamma(r.lo().get(), x.lo().get(), MPFR_RNDD);
    mpfr_digamma(r.hi().get(), x.hi().get(), MPFR_RNDU);
    return r;
  }
  // (-1)^{k+1} psi^{(k)} is positive and decreasing on x > 0.
  Interval at_lo = polygamma_point(k, x.lo(), p);
  Interval at_hi = x.is_point() ? at_lo : polygamma_point(k, x.hi(), p);
  Interval r(p);
  if (k % 2 == 1) {
    mpfr_set(r.lo().get(), at_hi.lo().get(), MPFR_RNDD);
    mpfr_set(r.hi().get(), at_lo.hi().get(), MPFR_RNDU);
  } else {
    mpfr_set(r.lo().get(), at_lo.lo().get(), MPFR_RNDD);
    mpfr_set(r.hi().get(), at_hi.hi().get(), MPFR_RNDU);
  }
  return r;
}

Interval zeta_deriv(int j, const Interval& s) {
  if (mpfr_cmp_ui(s.lo().get(), 1) <= 0) {
    if (mpfr_cmp_ui(s.hi().get(), 1) <= 0) throw DomainError("zeta needs s > 1");
    throw NeedsPrecision("zeta argument touches the pole");
  }
  const mpfr_prec_t p = s.prec();
  Interval r(p);
  if (j == 0) {
    mpfr_zeta(r.lo().get(), s.hi().get(), MPFR_RNDD);
    mpfr_zeta(r.hi().get(), s.lo().get(), MPFR_RNDU);
    return r;
  }
  // (-1)^j zeta^{(j)} = sum (log n)^j n^{-s} is positive and decreasing in s.
  Interval at_lo = zeta_tail_sum(j, s.lo(), p);
  Interval at_hi = s.is_point() ? at_lo : zeta_tail_sum(j, s.hi(), p);
  mpfr_set(r.lo().get(), at_hi.lo().get(), MPFR_RNDD);
  mpfr_set(r.hi().get(), at_lo.hi().get(), MPFR_RNDU);
  return (j % 2 == 0) ? r : -r;
}

Interval eint(const Interval& x) {
  if (x.lo().sign() <= 0) throw NeedsPrecision("Ei argument must be positive");
  Interval r(x.prec());
  mpfr_eint(r.lo().get(), x.lo().get(), MPFR_RNDD);
  mpfr_eint(r.hi().get(), x.hi().get(), MPFR_RNDU);
  return r;
}

Interval li2(const Interval& u) {
  if (mpfr_cmp_ui(u.hi().get(), 1) <= 0) throw DomainError("li needs argument > 1");
  if (mpfr_cmp_ui(u.lo().get(), 1) <= 0) throw NeedsPrecision("li argument touches 1");
  const mpfr_prec_t p = u.prec();
  return eint(log(u)) - eint(log(Interval::from_si(2, p)));
}

}  // namespace hr
