#include "hardyrec/core/growth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hardyrec/core/evaluate.hpp"
#include "hardyrec/error.hpp"
#include "hardyrec/numeric/interval.hpp"

namespace hr {

namespace {

constexpr int kSamples = 7;

double const_value(const HardyExpr& e) {
  return eval_interval(e, Interval::from_si(0, 96), 96).mid_d();
}

bool is_zero(const mpq_class& q) { return q == 0; }

// -1, 0, 1 comparing the growth exponents (p, q, r); 2 when undecidable.
int cmp_growth(const Monomial& a, const Monomial& b) {
  if (a.p_rational && b.p_rational) {
    if (a.p_q != b.p_q) return a.p_q < b.p_q ? -1 : 1;
  } else {
    if (std::abs(a.p - b.p) < 1e-12) return 2;
    return a.p < b.p ? -1 : 1;
  }
  if (a.q != b.q) return a.q < b.q ? -1 : 1;
  if (a.r != b.r) return a.r < b.r ? -1 : 1;
  return 0;
}

bool tends_to_infinity(const Monomial& m) {
  if (m.p > 0) return true;
  if (m.p < 0) return false;
  if (m.q != 0) return m.q > 0;
  return m.r > 0;
}

bool tends_to_zero(const Monomial& m) {
  if (m.p < 0) return true;
  if (m.p > 0) return false;
  if (m.q != 0) return m.q < 0;
  return m.r < 0;
}

bool is_constant_mono(const Monomial& m) { return m.p == 0 && m.p_rational && is_zero(m.q) && is_zero(m.r); }

Monomial scalar(double c) {
  Monomial m;
  m.c = c;
  return m;
}

std::optional<Monomial> lead(const HardyExpr& e) {
  if (e.is_constant_expr()) {
    try {
      return scalar(const_value(e));
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  switch (e.kind()) {
    case Kind::Var: {
      Monomial m = scalar(1.0);
      m.p = 1;
      m.p_q = 1;
      return m;
    }
    case Kind::Sum: {
      std::optional<Monomial> best;
      for (const auto& k : e.kids()) {
        auto m = lead(k);
        if (!m) return std::nullopt;
        if (m->c == 0) continue;
        if (!best) {
          best = m;
          continue;
        }
        const int c = cmp_growth(*m, *best);
        if (c == 2) return std::nullopt;
        if (c > 0) {
          best = m;
        } else if (c == 0) {
          const double s = best->c + m->c;
          if (std::abs(s) <= 1e-12 * std::max(std::abs(best->c), std::abs(m->c))) return std::nullopt;
          best->c = s;
        }
      }
      if (!best) return scalar(0.0);
      return best;
    }
    case Kind::Product:
    case Kind::Quotient: {
      Monomial acc = scalar(1.0);
      acc.p_q = 0;
      for (std::size_t i = 0; i < e.kids().size(); ++i) {
        auto m = lead(e.kid(i));
        if (!m) return std::nullopt;
        const bool div = e.kind() == Kind::Quotient && i == 1;
        if (div && m->c == 0) return std::nullopt;
        acc.c = div ? acc.c / m->c : acc.c * m->c;
        acc.p = div ? acc.p - m->p : acc.p + m->p;
        acc.p_rational = acc.p_rational && m->p_rational;
        if (div) {
          if (acc.p_rational) acc.p_q -= m->p_q;
          acc.q -= m->q;
          acc.r -= m->r;
        } else {
          if (acc.p_rational) acc.p_q += m->p_q;
          acc.q += m->q;
          acc.r += m->r;
        }
      }
      return acc;
    }
    case Kind::Power: {
      const HardyExpr& ex = e.kid(1);
      if (!ex.is_constant_expr()) return std::nullopt;
      auto b = lead(e.kid(0));
      if (!b || b->c == 0) return std::nullopt;
      const bool rational = ex.kind() == Kind::Constant;
      const double v = rational ? ex.value().get_d() : const_value(ex);
      if (b->c < 0 && !(rational && ex.value().get_den() == 1)) return std::nullopt;
      if (!rational && (!is_zero(b->q) || !is_zero(b->r))) return std::nullopt;
      Monomial m;
      m.c = std::pow(b->c, v);
      m.p = b->p * v;
      if (rational && b->p_rational) {
        m.p_q = b->p_q * ex.value();
      } else {
        m.p_rational = b->p == 0;
        m.p_q = 0;
      }
      if (rational) {
        m.q = b->q * ex.value();
        m.r = b->r * ex.value();
      }
      return m;
    }
    case Kind::Exp: {
      auto u = lead(e.kid(0));
      if (!u) return std::nullopt;
      if (u->c == 0 || tends_to_zero(*u)) return scalar(1.0);
      if (is_constant_mono(*u)) return scalar(std::exp(u->c));
      return std::nullopt;
    }
    case Kind::Log: {
      auto u = lead(e.kid(0));
      if (!u || u->c <= 0) return std::nullopt;
      if (u->p != 0) {
        if (!u->p_rational) {
          Monomial m = scalar(u->p);
          m.q = 1;
          return m;
        }
        Monomial m = scalar(u->p_q.get_d());
        m.q = 1;
        return m;
      }
      if (u->q != 0) {
        Monomial m = scalar(u->q.get_d());
        m.r = 1;
        return m;
      }
      if (u->r != 0) return std::nullopt;
      if (u->c == 1.0) return std::nullopt;
      return scalar(std::log(u->c));
    }
    case Kind::Prim: {
      auto u = lead(e.kid(0));
      if (!u || u->c <= 0) return std::nullopt;
      const bool up = tends_to_infinity(*u);
      switch (e.prim()) {
        case PrimId::GammaLn: {
          if (u->p > 0) {
            Monomial m = *u;
            m.c = u->c * u->p;
            m.q += 1;
            return m;
          }
          if (u->p == 0 && u->q > 0) {
            Monomial m = *u;
            m.c = u->c * u->q.get_d();
            m.r += 1;
            return m;
          }
          return std::nullopt;
        }
        case PrimId::Zeta:
        case PrimId::CosInvLog:
          if (up) return scalar(1.0);
          return std::nullopt;
        case PrimId::ZetaDeriv:
          return std::nullopt;
        case PrimId::Li: {
          if (!(u->p > 0)) return std::nullopt;
          Monomial m = *u;
          m.c = u->c / u->p;
          m.q -= 1;
          return m;
        }
        case PrimId::SinInvLog: {
          if (u->p > 0) {
            Monomial m = scalar(1.0 / u->p);
            m.q = -1;
            return m;
          }
          if (u->p == 0 && u->q > 0) {
            Monomial m = scalar(1.0 / u->q.get_d());
            m.r = -1;
            return m;
          }
          return std::nullopt;
        }
        case PrimId::Polygamma: {
          if (!(u->p > 0)) return std::nullopt;
          const int k = e.order();
          if (k == 0) {
            Monomial m = scalar(u->p);
            m.q = 1;
            return m;
          }
          Monomial m;
          double f = 1;
          for (int i = 1; i < k; ++i) f *= i;
          m.c = ((k % 2 == 1) ? 1.0 : -1.0) * f * std::pow(u->c, -k);
          m.p = -k * u->p;
          m.p_rational = u->p_rational;
          m.p_q = u->p_q * (-k);
          m.q = u->q * (-k);
          m.r = u->r * (-k);
          return m;
        }
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

// log |f(x)| at the sample point, or nullopt on overflow.
struct LogSample {
  bool overflow = false;
  int sign = 0;
  BigFloat value{160};
};

LogSample log_sample(const HardyExpr& f, const mpz_class& x) {
  LogSample s;
  for (mpfr_prec_t p = 160; p <= 1280; p *= 2) {
    try {
      Interval v = eval_interval(f, Interval::from_z(x, p), p);
      if (v.contains_zero()) throw NeedsPrecision("sample straddles zero");
      s.sign = v.positive() ? 1 : -1;
      Interval lv = log(abs(v));
      s.value = lv.mid();
      return s;
    } catch (const OverflowError&) {
      s.overflow = true;
      return s;
    } catch (const NeedsPrecision&) {
    }
  }
  throw Inconclusive("cannot resolve sample value of " + to_string(f));
}

mpz_class sample_point(int j) {
  mpz_class x;
  mpz_ui_pow_ui(x.get_mpz_t(), 10, static_cast<unsigned long>(3) << j);
  return x;
}

double log_of(const mpz_class& x) {
  BigFloat v(160);
  mpfr_set_z(v.get(), x.get_mpz_t(), MPFR_RNDN);
  mpfr_log(v.get(), v.get(), MPFR_RNDN);
  return v.to_double();
}

double diff_d(const BigFloat& a, const BigFloat& b) {
  BigFloat d(std::max(a.prec(), b.prec()));
  mpfr_sub(d.get(), a.get(), b.get(), MPFR_RNDN);
  return d.to_double();
}

enum class Trend { Converging, Increasing, Decreasing, Mixed };

// Trend of g_0..g_6 judged from the last three increments.
Trend trend_of(const std::vector<BigFloat>& g, double* last_delta, double* prev_delta) {
  const std::size_t n = g.size();
  double d[3];
  for (int i = 0; i < 3; ++i) d[i] = diff_d(g[n - 3 + i], g[n - 4 + i]);
  if (last_delta) *last_delta = d[2];
  if (prev_delta) *prev_delta = d[1];
  const bool tiny = std::abs(d[0]) < 1e-25 && std::abs(d[1]) < 1e-25 && std::abs(d[2]) < 1e-25;
  const bool shrinking = std::abs(d[1]) <= 0.6 * std::abs(d[0]) && std::abs(d[2]) <= 0.6 * std::abs(d[1]);
  if (tiny || shrinking) return Trend::Converging;
  if (d[0] > 0 && d[1] > 0 && d[2] > 0) return Trend::Increasing;
  if (d[0] < 0 && d[1] < 0 && d[2] < 0) return Trend::Decreasing;
  return Trend::Mixed;
}

struct Verdict {
  GrowthClass cls = GrowthClass::Bounded;
  int k = 0;
  double c = 0.0;
};

Verdict from_monomial(const Monomial& m) {
  Verdict v;
  if (!tends_to_infinity(m) && !is_constant_mono(m) && tends_to_zero(m)) return v;
  if (is_constant_mono(m)) {
    v.c = m.c;
    return v;
  }
  if (m.p_rational && m.p_q.get_den() == 1) {
    const int p = static_cast<int>(m.p_q.get_num().get_si());
    if (is_zero(m.q) && is_zero(m.r)) {
      v.cls = GrowthClass::ExactPowerObstruction;
      v.k = p;
      v.c = m.c;
      return v;
    }
    v.cls = GrowthClass::StrictlyBetween;
    v.k = (m.q > 0 || (is_zero(m.q) && m.r > 0)) ? p : p - 1;
    return v;
  }
  v.cls = GrowthClass::StrictlyBetween;
  v.k = static_cast<int>(std::floor(m.p));
  return v;
}

Verdict numeric_verdict(const HardyExpr& a, int cap) {
  std::vector<BigFloat> L;
  std::vector<double> ell;
  for (int j = 0; j < kSamples; ++j) {
    const mpz_class x = sample_point(j);
    LogSample s = log_sample(a, x);
    if (s.overflow) return {GrowthClass::SuperPolynomial, 0, 0.0};
    if (s.sign < 0) throw PreconditionError("expression is not eventually positive");
    L.push_back(s.value);
    ell.push_back(log_of(x));
  }
  std::vector<double> e(kSamples);
  for (int j = 0; j < kSamples; ++j) e[j] = L[j].to_double() / ell[j];
  if (e.back() > cap) return {GrowthClass::SuperPolynomial, 0, 0.0};
  const double de3 = e[4] - e[3], de4 = e[5] - e[4], de5 = e[6] - e[5];
  if (de3 > 0 && de4 > 0 && de5 > 0 && de4 >= 0.95 * de3 && de5 >= 0.95 * de4) {
    return {GrowthClass::SuperPolynomial, 0, 0.0};
  }
  if (e.back() < -0.5) return {GrowthClass::Bounded, 0, 0.0};
  const long i = std::max(0L, std::lround(e.back()));
  std::vector<BigFloat> g;
  for (int j = 0; j < kSamples; ++j) {
    BigFloat v(L[j].prec());
    BigFloat lx(L[j].prec());
    mpfr_set_z(lx.get(), sample_point(j).get_mpz_t(), MPFR_RNDN);
    mpfr_log(lx.get(), lx.get(), MPFR_RNDN);
    mpfr_mul_si(lx.get(), lx.get(), i, MPFR_RNDN);
    mpfr_sub(v.get(), L[j].get(), lx.get(), MPFR_RNDN);
    g.push_back(v);
  }
  double last = 0, prev = 0;
  switch (trend_of(g, &last, &prev)) {
    case Trend::Converging: {
      Verdict v;
      v.cls = i == 0 ? GrowthClass::Bounded : GrowthClass::ExactPowerObstruction;
      v.k = static_cast<int>(i);
      v.c = std::exp(g.back().to_double());
      return v;
    }
    case Trend::Increasing:
      return {GrowthClass::StrictlyBetween, static_cast<int>(i), 0.0};
    case Trend::Decreasing:
      if (i == 0) return {GrowthClass::Bounded, 0, 0.0};
      return {GrowthClass::StrictlyBetween, static_cast<int>(i - 1), 0.0};
    case Trend::Mixed:
      break;
  }
  throw Inconclusive("numeric sampling of " + to_string(a) + " is not monotone");
}

}  // namespace

std::optional<Monomial> leading_monomial(const HardyExpr& e) {
  auto m = lead(e);
  if (!m) m = lead(simplify(e));
  return m;
}

const char* to_string(GrowthClass c) {
  switch (c) {
    case GrowthClass::StrictlyBetween: return "strictly-between";
    case GrowthClass::ExactPowerObstruction: return "exact-power-obstruction";
    case GrowthClass::SuperPolynomial: return "super-polynomial";
    case GrowthClass::Bounded: return "bounded";
  }
  return "?";
}

const char* to_string(Order o) {
  switch (o) {
    case Order::Less: return "<";
    case Order::Similar: return "~";
    case Order::Greater: return ">";
  }
  return "?";
}

bool PropertyReport::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

SignInfo eventual_sign(const HardyExpr& a) {
  constexpr int kMaxJ = 60;
  std::vector<int> sign(kMaxJ + 1, 0);  // 0 = undefined
  auto sign_at = [&](const mpz_class& x) -> int {
    for (mpfr_prec_t p = 64; p <= 1024; p *= 2) {
      try {
        Interval v = eval_interval(a, Interval::from_z(x, p), p);
        if (v.positive()) return 1;
        if (v.negative()) return -1;
        if (v.lo().is_zero() && v.hi().is_zero()) return 0;
      } catch (const NeedsPrecision&) {
      } catch (const Error&) {
        return 0;
      }
    }
    return 0;
  };
  for (int j = 0; j <= kMaxJ; ++j) sign[j] = sign_at(mpz_class(1) << j);
  const int s = sign[kMaxJ];
  if (s == 0) throw Inconclusive("sign undetermined at the sampling cap");
  for (int j = kMaxJ - 7; j <= kMaxJ; ++j) {
    if (sign[j] != s) throw Inconclusive("sign not settled within the sampling cap");
  }
  int bad = -1;
  for (int j = 0; j <= kMaxJ; ++j) {
    if (sign[j] != s) bad = j;
  }
  SignInfo info;
  info.sign = s;
  if (bad < 0) return info;
  mpz_class lo = mpz_class(1) << bad;
  mpz_class hi = mpz_class(1) << (bad + 1);
  while (hi - lo > 1) {
    mpz_class mid = (lo + hi) / 2;
    if (sign_at(mid) == s) hi = mid; else lo = mid;
  }
  info.threshold = hi;
  return info;
}

GrowthInfo growth_exponent(const HardyExpr& a, int cap) {
  SignInfo si = eventual_sign(a);
  if (si.sign < 0) throw PreconditionError("expression is eventually negative; negate it first");
  Verdict num = numeric_verdict(a, cap);
  GrowthInfo info;
  info.sign = si.sign;
  info.threshold = si.threshold;
  if (auto m = leading_monomial(a)) {
    Verdict sym = from_monomial(*m);
    if (sym.cls != num.cls || sym.k != num.k) {
      std::ostringstream os;
      os << "expansion says " << to_string(sym.cls) << " k=" << sym.k << ", sampling says "
         << to_string(num.cls) << " k=" << num.k;
      throw Inconclusive(os.str());
    }
    info.symbolic = true;
    info.obstruction_c = sym.c;
  } else {
    info.obstruction_c = num.c;
  }
  info.k = num.k;
  info.classification = num.cls;
  return info;
}

Comparison compare_growth(const HardyExpr& a, const HardyExpr& b) {
  std::vector<BigFloat> R;
  for (int j = 0; j < kSamples; ++j) {
    const mpz_class x = sample_point(j);
    LogSample sa = log_sample(a, x);
    LogSample sb = log_sample(b, x);
    if (sa.overflow || sb.overflow) throw Inconclusive("sample overflow in compare_growth");
    if (sa.sign < 0 || sb.sign < 0) throw PreconditionError("compare_growth needs eventually positive inputs");
    BigFloat d(sa.value.prec());
    mpfr_sub(d.get(), sa.value.get(), sb.value.get(), MPFR_RNDN);
    R.push_back(d);
  }
  double last = 0, prev = 0;
  const Trend t = trend_of(R, &last, &prev);
  if (t == Trend::Mixed) throw Inconclusive("ratio sampling is not monotone");
  Comparison out;
  out.order = t == Trend::Converging ? Order::Similar : (t == Trend::Increasing ? Order::Greater : Order::Less);
  if (out.order == Order::Similar) {
    double corr = 0.0;
    if (prev != 0.0 && std::abs(last) > 1e-300) {
      const double rho = last / prev;
      if (std::abs(rho) < 1.0) corr = last * rho / (1.0 - rho);
    }
    out.c = std::exp(R.back().to_double() + corr);
    out.c_error = out.c * std::max({std::abs(corr), std::abs(last), 1e-15});
  }
  auto m = leading_monomial(simplify(quotient(a, b)));
  if (m) {
    Order sym;
    if (is_constant_mono(*m)) {
      sym = Order::Similar;
    } else {
      sym = tends_to_infinity(*m) ? Order::Greater : Order::Less;
    }
    if (sym != out.order) throw Inconclusive("expansion and sampling disagree in compare_growth");
    out.symbolic = true;
    if (sym == Order::Similar) {
      out.c_error = std::max(out.c_error, std::abs(out.c - m->c));
      out.c = m->c;
    }
  }
  return out;
}

PropertyReport check_basic_properties(const HardyExpr& a, int k, const std::vector<mpz_class>& grid) {
  if (k < 0) throw PreconditionError("k must be non-negative");
  if (grid.size() < 2) throw PreconditionError("grid needs at least two points");
  PropertyReport rep;
  std::vector<HardyExpr> der;
  for (int l = 0; l <= k + 1; ++l) der.push_back(l == 0 ? a : differentiate(der.back(), 1));

  auto logs = [&](const HardyExpr& f, std::vector<int>* signs) {
    std::vector<double> out;
    for (const auto& x : grid) {
      LogSample s = log_sample(f, x);
      if (s.overflow) throw Inconclusive("overflow on property grid");
      if (signs) signs->push_back(s.sign);
      out.push_back(s.value.to_double());
    }
    return out;
  };
  std::vector<double> lx;
  for (const auto& x : grid) lx.push_back(log_of(x));
  auto monotone = [](const std::vector<double>& v, bool increasing, std::size_t* where) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (increasing ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) {
        *where = i;
        return false;
      }
    }
    return true;
  };
  auto add = [&](const std::string& name, bool pass, const std::string& witness) {
    rep.checks.push_back({name, pass, witness});
  };
  auto at = [&](std::size_t i) { return "x=" + grid[i].get_str(); };

  std::vector<std::vector<double>> ld;
  for (int l = 0; l <= k + 1; ++l) {
    std::vector<int> signs;
    ld.push_back(logs(der[l], &signs));
    bool pos = true;
    std::size_t where = 0;
    for (std::size_t i = 0; i < signs.size(); ++i) {
      if (signs[i] <= 0) {
        pos = false;
        where = i;
        break;
      }
    }
    add("(i) a^(" + std::to_string(l) + ") > 0", pos, pos ? "all grid points" : at(where));
  }
  for (int l = 0; l <= k; ++l) {
    std::vector<double> lo_r, hi_r;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      lo_r.push_back(ld[l][i] - (k - l) * lx[i]);
      hi_r.push_back(ld[l][i] - (k + 1 - l) * lx[i]);
    }
    std::size_t w = 0;
    bool ok = monotone(lo_r, true, &w);
    add("(i) x^" + std::to_string(k - l) + " < a^(" + std::to_string(l) + ")", ok, ok ? "ratio increasing" : at(w));
    ok = monotone(hi_r, false, &w);
    add("(i) a^(" + std::to_string(l) + ") < x^" + std::to_string(k + 1 - l), ok, ok ? "ratio decreasing" : at(w));
  }
  {
    std::vector<double> lo_r;
    for (std::size_t i = 0; i < grid.size(); ++i) lo_r.push_back(ld[k + 1][i] + 1.25 * lx[i]);
    std::size_t w = 0;
    bool ok = monotone(lo_r, true, &w);
    add("(i) x^(-1-1/4) < a^(k+1)", ok, ok ? "ratio increasing" : at(w));
    ok = monotone(ld[k + 1], false, &w);
    add("(i)/(ii) a^(k+1) decreasing to 0", ok, ok ? "values decreasing" : at(w));
  }
  for (int l = 0; l <= k; ++l) {
    std::size_t w = 0;
    const bool ok = monotone(ld[l], true, &w);
    add("(ii) a^(" + std::to_string(l) + ") increasing", ok, ok ? "values increasing" : at(w));
  }
  {
    std::vector<double> ldiff, rel;
    for (const auto& x : grid) {
      Interval v0, v1;
      for (mpfr_prec_t p = 192;; p *= 2) {
        try {
          v0 = eval_interval(a, Interval::from_z(x, p), p);
          v1 = eval_interval(a, Interval::from_z(x + 1, p), p);
          Interval d = v1 - v0;
          if (d.contains_zero()) throw NeedsPrecision("difference straddles zero");
          ldiff.push_back(log(abs(d)).mid_d());
          rel.push_back(log(abs(d / v0)).mid_d());
          break;
        } catch (const NeedsPrecision&) {
          if (p > 2048) throw Inconclusive("cannot resolve a(x+1)-a(x)");
        }
      }
    }
    std::size_t w = 0;
    if (k >= 1) {
      std::vector<double> lo_r, hi_r;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        lo_r.push_back(ldiff[i] - (k - 1) * lx[i]);
        hi_r.push_back(ldiff[i] - k * lx[i]);
      }
      bool ok = monotone(lo_r, true, &w);
      add("(iii) x^" + std::to_string(k - 1) + " < a(x+1)-a(x)", ok, ok ? "ratio increasing" : at(w));
      ok = monotone(hi_r, false, &w);
      add("(iii) a(x+1)-a(x) < x^" + std::to_string(k), ok, ok ? "ratio decreasing" : at(w));
    } else {
      const bool ok = monotone(ldiff, false, &w);
      add("(iii) a(x+1)-a(x) < 1", ok, ok ? "differences decreasing" : at(w));
      rep.cofinite_range = ok;
    }
    const bool ok = monotone(rel, false, &w);
    add("(iv) a(x+1)/a(x) -> 1", ok, ok ? "|ratio-1| decreasing" : at(w));
  }
  return rep;
}

}  // namespace hr
