#include "hardyrec/core/expr.hpp"
#include "hardyrec/error.hpp"

namespace hr {

namespace {

HardyExpr inv(const HardyExpr& u) { return power(u, constant(-1)); }

HardyExpr d(const HardyExpr& e) {
  switch (e.kind()) {
    case Kind::Constant:
    case Kind::Named:
      return constant(0);
    case Kind::Var:
      return constant(1);
    case Kind::Sum: {
      std::vector<HardyExpr> t;
      for (const auto& k : e.kids()) t.push_back(d(k));
      return sum(std::move(t));
    }
    case Kind::Product: {
      std::vector<HardyExpr> t;
      for (std::size_t i = 0; i < e.kids().size(); ++i) {
        if (e.kid(i).is_constant_expr()) continue;
        std::vector<HardyExpr> f = e.kids();
        f[i] = d(f[i]);
        t.push_back(product(std::move(f)));
      }
      return sum(std::move(t));
    }
    case Kind::Quotient: {
      const HardyExpr& u = e.kid(0);
      const HardyExpr& v = e.kid(1);
      HardyExpr num = sum({product({d(u), v}), product({constant(-1), u, d(v)})});
      return product({num, power(v, constant(-2))});
    }
    case Kind::Power: {
      const HardyExpr& b = e.kid(0);
      const HardyExpr& ex = e.kid(1);
      if (ex.is_constant_expr()) {
        return product({ex, power(b, sum({ex, constant(-1)})), d(b)});
      }
      return product({e, sum({product({d(ex), log(b)}), product({ex, d(b), inv(b)})})});
    }
    case Kind::Exp:
      return product({e, d(e.kid(0))});
    case Kind::Log:
      return product({d(e.kid(0)), inv(e.kid(0))});
    case Kind::Prim: {
      const HardyExpr& u = e.kid(0);
      const HardyExpr du = d(u);
      switch (e.prim()) {
        case PrimId::GammaLn:
          return product({prim(PrimId::Polygamma, u, 0), du});
        case PrimId::Polygamma:
          return product({prim(PrimId::Polygamma, u, e.order() + 1), du});
        case PrimId::Zeta:
          return product({prim(PrimId::ZetaDeriv, u, 1), du});
        case PrimId::ZetaDeriv:
          return product({prim(PrimId::ZetaDeriv, u, e.order() + 1), du});
        case PrimId::Li:
          return product({du, inv(log(u))});
        case PrimId::SinInvLog:
          // d sin(1/log u) = cos(1/log u) * (-u' / (u log^2 u))
          return product({constant(-1), prim(PrimId::CosInvLog, u), du, inv(u),
                          power(log(u), constant(-2))});
        case PrimId::CosInvLog:
          return product({prim(PrimId::SinInvLog, u), du, inv(u), power(log(u), constant(-2))});
      }
      break;
    }
  }
  throw DomainError("no derivative rule");
}

}  // namespace

HardyExpr differentiate(const HardyExpr& e, int order) {
  if (order < 0) throw PreconditionError("derivative order must be non-negative");
  HardyExpr r = e;
  for (int i = 0; i < order; ++i) r = simplify(d(r));
  return r;
}

}  // namespace hr
