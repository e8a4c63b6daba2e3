#include "hardyrec/core/evaluate.hpp"

#include <cmath>

#include "hardyrec/error.hpp"
#include "hardyrec/numeric/special.hpp"

namespace hr {

Interval named_value(NamedId id, mpfr_prec_t prec) {
  switch (id) {
    case NamedId::Sqrt2: return sqrt(Interval::from_si(2, prec));
    case NamedId::Sqrt3: return sqrt(Interval::from_si(3, prec));
    case NamedId::Sqrt5: return sqrt(Interval::from_si(5, prec));
    case NamedId::Pi: return interval_pi(prec);
    case NamedId::E: return interval_e(prec);
    case NamedId::Phi: {
      Interval s = sqrt(Interval::from_si(5, prec)) + 1;
      return s / Interval::from_si(2, prec);
    }
  }
  throw DomainError("unknown named constant");
}

Interval eval_interval(const HardyExpr& e, const Interval& x, mpfr_prec_t prec) {
  if (mpfr_get_emax() != mpfr_get_emax_max()) {
    mpfr_set_emax(mpfr_get_emax_max());
    mpfr_set_emin(mpfr_get_emin_min());
  }
  switch (e.kind()) {
    case Kind::Constant:
      return Interval::from_q(e.value(), prec);
    case Kind::Named:
      return named_value(e.named(), prec);
    case Kind::Var:
      return x;
    case Kind::Sum: {
      Interval acc = eval_interval(e.kid(0), x, prec);
      for (std::size_t i = 1; i < e.kids().size(); ++i) acc = acc + eval_interval(e.kid(i), x, prec);
      return acc;
    }
    case Kind::Product: {
      Interval acc = eval_interval(e.kid(0), x, prec);
      for (std::size_t i = 1; i < e.kids().size(); ++i) acc = acc * eval_interval(e.kid(i), x, prec);
      return acc;
    }
    case Kind::Quotient:
      return eval_interval(e.kid(0), x, prec) / eval_interval(e.kid(1), x, prec);
    case Kind::Power: {
      const HardyExpr& ex = e.kid(1);
      Interval b = eval_interval(e.kid(0), x, prec);
      if (ex.kind() == Kind::Constant && ex.value().get_den() == 1) return pow_z(b, ex.value().get_num());
      return pow(b, eval_interval(ex, x, prec));
    }
    case Kind::Exp:
      return exp(eval_interval(e.kid(0), x, prec));
    case Kind::Log:
      return log(eval_interval(e.kid(0), x, prec));
    case Kind::Prim: {
      Interval u = eval_interval(e.kid(0), x, prec);
      switch (e.prim()) {
        case PrimId::GammaLn: return lngamma(u);
        case PrimId::Zeta: return zeta_deriv(0, u);
        case PrimId::ZetaDeriv: return zeta_deriv(e.order(), u);
        case PrimId::Polygamma: return polygamma(e.order(), u);
        case PrimId::Li: return li2(u);
        case PrimId::SinInvLog: return sin(Interval::from_si(1, prec) / log(u));
        case PrimId::CosInvLog: return cos(Interval::from_si(1, prec) / log(u));
      }
      break;
    }
  }
  throw DomainError("cannot evaluate node");
}

namespace {

std::optional<mpq_class> exact_pow(const mpq_class& b, const mpq_class& ex) {
  if (b == 0) return ex > 0 ? std::optional<mpq_class>(0) : std::nullopt;
  const mpz_class q = ex.get_den();
  mpq_class base = b;
  if (q != 1) {
    if (b < 0 || !q.fits_ulong_p() || q > 64) return std::nullopt;
    mpz_class rn, rd;
    if (!mpz_root(rn.get_mpz_t(), b.get_num_mpz_t(), q.get_ui())) return std::nullopt;
    if (!mpz_root(rd.get_mpz_t(), b.get_den_mpz_t(), q.get_ui())) return std::nullopt;
    base = mpq_class(rn, rd);
  }
  const mpz_class p = ex.get_num();
  if (abs(p) > 4096) return std::nullopt;
  const unsigned long n = mpz_class(abs(p)).get_ui();
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), n);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), n);
  mpq_class r = p >= 0 ? mpq_class(num, den) : mpq_class(den, num);
  r.canonicalize();
  return r;
}

// j with u = v^j exactly, for positive rationals u, v != 1.
std::optional<mpq_class> exact_log_ratio(const mpq_class& u, const mpq_class& v) {
  if (u <= 0 || v <= 0 || v == 1) return std::nullopt;
  if (u == 1) return mpq_class(0);
  const double j = std::log(std::abs(u.get_d())) / std::log(std::abs(v.get_d()));
  if (!std::isfinite(j) || std::abs(j) > 4096) return std::nullopt;
  const long jr = std::lround(j);
  if (jr == 0) return std::nullopt;
  auto pw = exact_pow(v, mpq_class(jr));
  if (pw && *pw == u) return mpq_class(jr);
  return std::nullopt;
}

}  // namespace

std::optional<mpq_class> exact_value(const HardyExpr& e, const mpq_class& x) {
  switch (e.kind()) {
    case Kind::Constant:
      return e.value();
    case Kind::Var:
      return x;
    case Kind::Named:
      return std::nullopt;
    case Kind::Sum: {
      mpq_class acc = 0;
      for (const auto& k : e.kids()) {
        auto v = exact_value(k, x);
        if (!v) return std::nullopt;
        acc += *v;
      }
      return acc;
    }
    case Kind::Product: {
      mpq_class acc = 1;
      for (const auto& k : e.kids()) {
        auto v = exact_value(k, x);
        if (!v) return std::nullopt;
        acc *= *v;
      }
      return acc;
    }
    case Kind::Quotient: {
      const HardyExpr& n = e.kid(0);
      const HardyExpr& d = e.kid(1);
      if (n.kind() == Kind::Log && d.kind() == Kind::Log) {
        auto u = exact_value(n.kid(0), x);
        auto v = exact_value(d.kid(0), x);
        if (u && v) return exact_log_ratio(*u, *v);
        return std::nullopt;
      }
      auto a = exact_value(n, x);
      if (!a) return std::nullopt;
      auto b = exact_value(d, x);
      if (!b || *b == 0) return std::nullopt;
      return mpq_class(*a / *b);
    }
    case Kind::Power: {
      auto b = exact_value(e.kid(0), x);
      if (!b) return std::nullopt;
      auto ex = exact_value(e.kid(1), x);
      if (!ex) return std::nullopt;
      return exact_pow(*b, *ex);
    }
    case Kind::Exp: {
      auto u = exact_value(e.kid(0), x);
      if (u && *u == 0) return mpq_class(1);
      return std::nullopt;
    }
    case Kind::Log: {
      auto u = exact_value(e.kid(0), x);
      if (u && *u == 1) return mpq_class(0);
      return std::nullopt;
    }
    case Kind::Prim:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace hr
