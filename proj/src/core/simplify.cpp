#include <algorithm>
#include <map>
#include <optional>

#include "hardyrec/core/expr.hpp"
#include "hardyrec/error.hpp"

namespace hr {

namespace {

struct ExprLess {
  bool operator()(const HardyExpr& a, const HardyExpr& b) const { return compare(a, b) < 0; }
};

HardyExpr simp(const HardyExpr& e);
HardyExpr simplify_sum(const std::vector<HardyExpr>& terms);
HardyExpr simplify_product(const std::vector<HardyExpr>& factors);

// Exact q-th root of a non-negative integer, if it exists.
bool exact_root(const mpz_class& v, unsigned long q, mpz_class* out) {
  return mpz_root(out->get_mpz_t(), v.get_mpz_t(), q) != 0;
}

bool small_enough(const mpq_class& b, const mpz_class& n) {
  if (abs(n) > 4096) return false;
  const std::size_t bits = mpz_sizeinbase(b.get_num_mpz_t(), 2) + mpz_sizeinbase(b.get_den_mpz_t(), 2);
  return bits * mpz_class(abs(n)).get_ui() <= 65536;
}

std::optional<mpq_class> pow_exact(const mpq_class& b, const mpq_class& ex) {
  if (b == 0) {
    if (ex > 0) return mpq_class(0);
    return std::nullopt;
  }
  if (b == 1) return mpq_class(1);
  mpq_class base = b;
  const mpz_class q = ex.get_den();
  if (q != 1) {
    if (b < 0 || !q.fits_ulong_p() || q > 64) return std::nullopt;
    mpz_class rn, rd;
    if (!exact_root(b.get_num(), q.get_ui(), &rn) || !exact_root(b.get_den(), q.get_ui(), &rd)) {
      return std::nullopt;
    }
    base = mpq_class(rn, rd);
  }
  const mpz_class p = ex.get_num();
  if (!small_enough(base, p)) return std::nullopt;
  mpz_class num, den;
  const unsigned long n = mpz_class(abs(p)).get_ui();
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), n);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), n);
  mpq_class r = p >= 0 ? mpq_class(num, den) : mpq_class(den, num);
  r.canonicalize();
  return r;
}

long named_square(NamedId id) {
  switch (id) {
    case NamedId::Sqrt2: return 2;
    case NamedId::Sqrt3: return 3;
    case NamedId::Sqrt5: return 5;
    default: return 0;
  }
}

HardyExpr simplify_power(const HardyExpr& b, const HardyExpr& ex) {
  if (ex.is_const(0)) return constant(1);
  if (ex.is_const(1)) return b;
  if (b.is_const(1)) return constant(1);
  if (ex.kind() == Kind::Constant) {
    const mpq_class& q = ex.value();
    if (b.kind() == Kind::Constant) {
      if (auto v = pow_exact(b.value(), q)) return constant(*v);
    }
    if (b.kind() == Kind::Power) {
      if (b.kid(1).kind() == Kind::Constant) return simplify_power(b.kid(0), constant(b.kid(1).value() * q));
      // A non-constant exponent already forces a positive base.
      return simplify_power(b.kid(0), simplify_product({b.kid(1), ex}));
    }
    if (b.kind() == Kind::Product) {
      std::vector<HardyExpr> parts;
      for (const auto& f : b.kids()) parts.push_back(simplify_power(f, ex));
      return simplify_product(parts);
    }
    if (b.kind() == Kind::Named && q.get_den() == 1) {
      if (const long k = named_square(b.named()); k != 0) {
        mpz_class n = q.get_num();
        mpz_class half, rem;
        mpz_fdiv_qr_ui(half.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t(), 2);
        if (auto c = pow_exact(mpq_class(k), mpq_class(half))) {
          if (rem == 0) return constant(*c);
          return simplify_product({constant(*c), b});
        }
      }
    }
  }
  return power(b, ex);
}

HardyExpr simplify_sum(const std::vector<HardyExpr>& terms) {
  std::vector<HardyExpr> flat;
  for (const auto& t : terms) {
    if (t.kind() == Kind::Sum) {
      flat.insert(flat.end(), t.kids().begin(), t.kids().end());
    } else {
      flat.push_back(t);
    }
  }
  mpq_class c0 = 0;
  std::map<HardyExpr, mpq_class, ExprLess> coef;
  for (const auto& t : flat) {
    if (t.kind() == Kind::Constant) {
      c0 += t.value();
      continue;
    }
    if (t.kind() == Kind::Product && t.kid(0).kind() == Kind::Constant) {
      std::vector<HardyExpr> rest(t.kids().begin() + 1, t.kids().end());
      coef[product(std::move(rest))] += t.kid(0).value();
    } else {
      coef[t] += 1;
    }
  }
  std::vector<HardyExpr> out;
  for (const auto& [rest, c] : coef) {
    if (c == 0) continue;
    if (c == 1) {
      out.push_back(rest);
    } else if (rest.kind() == Kind::Product) {
      std::vector<HardyExpr> f{constant(c)};
      f.insert(f.end(), rest.kids().begin(), rest.kids().end());
      out.push_back(product(std::move(f)));
    } else {
      out.push_back(product({constant(c), rest}));
    }
  }
  if (c0 != 0) out.push_back(constant(c0));
  return sum(std::move(out));
}

HardyExpr simplify_product(const std::vector<HardyExpr>& factors) {
  std::vector<HardyExpr> flat;
  for (const auto& f : factors) {
    if (f.kind() == Kind::Product) {
      flat.insert(flat.end(), f.kids().begin(), f.kids().end());
    } else {
      flat.push_back(f);
    }
  }
  mpq_class c = 1;
  std::map<HardyExpr, HardyExpr, ExprLess> expo;
  auto add = [&](const HardyExpr& base, const HardyExpr& ex) {
    auto it = expo.find(base);
    if (it == expo.end()) {
      expo.emplace(base, ex);
    } else {
      it->second = simplify_sum({it->second, ex});
    }
  };
  for (const auto& f : flat) {
    if (f.kind() == Kind::Constant) {
      c *= f.value();
    } else if (f.kind() == Kind::Power) {
      add(f.kid(0), f.kid(1));
    } else {
      add(f, constant(1));
    }
  }
  if (c == 0) return constant(0);
  std::vector<HardyExpr> out;
  for (const auto& [base, ex] : expo) {
    HardyExpr r = simplify_power(base, ex);
    if (r.kind() == Kind::Constant) {
      c *= r.value();
    } else if (r.kind() == Kind::Product) {
      for (const auto& f : r.kids()) {
        if (f.kind() == Kind::Constant) c *= f.value(); else out.push_back(f);
      }
    } else {
      out.push_back(r);
    }
  }
  if (c == 0) return constant(0);
  std::sort(out.begin(), out.end(), ExprLess());
  if (c != 1 || out.empty()) out.insert(out.begin(), constant(c));
  return product(std::move(out));
}

HardyExpr simp(const HardyExpr& e) {
  switch (e.kind()) {
    case Kind::Constant:
    case Kind::Named:
    case Kind::Var:
      return e;
    case Kind::Sum: {
      std::vector<HardyExpr> k;
      for (const auto& t : e.kids()) k.push_back(simp(t));
      return simplify_sum(k);
    }
    case Kind::Product: {
      std::vector<HardyExpr> k;
      for (const auto& t : e.kids()) k.push_back(simp(t));
      return simplify_product(k);
    }
    case Kind::Quotient: {
      HardyExpr num = simp(e.kid(0));
      HardyExpr den = simp(e.kid(1));
      if (den.is_const(0)) throw DomainError("division by zero during simplification");
      return simplify_product({num, simplify_power(den, constant(-1))});
    }
    case Kind::Power:
      return simplify_power(simp(e.kid(0)), simp(e.kid(1)));
    case Kind::Exp: {
      HardyExpr u = simp(e.kid(0));
      if (u.is_const(0)) return constant(1);
      if (u.kind() == Kind::Log) return u.kid(0);
      return exp(u);
    }
    case Kind::Log: {
      HardyExpr u = simp(e.kid(0));
      if (u.is_const(1)) return constant(0);
      if (u.kind() == Kind::Exp) return u.kid(0);
      if (u.kind() == Kind::Power && u.kid(1).is_constant_expr()) {
        return simplify_product({u.kid(1), simp(log(u.kid(0)))});
      }
      return log(u);
    }
    case Kind::Prim:
      return prim(e.prim(), simp(e.kid(0)), e.order());
  }
  return e;
}

}  // namespace

HardyExpr simplify(const HardyExpr& e) { return simp(e); }

}  // namespace hr
