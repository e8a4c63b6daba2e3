#include "hardyrec/core/expr.hpp"

#include "hardyrec/error.hpp"

namespace hr {

namespace {

HardyExpr make(Node n) { return HardyExpr(std::make_shared<const Node>(std::move(n))); }

int sgn(int v) { return (v > 0) - (v < 0); }

}  // namespace

Kind HardyExpr::kind() const { return n_->kind; }
const std::vector<HardyExpr>& HardyExpr::kids() const { return n_->kids; }
const mpq_class& HardyExpr::value() const { return n_->value; }
NamedId HardyExpr::named() const { return n_->named; }
PrimId HardyExpr::prim() const { return n_->prim; }
int HardyExpr::order() const { return n_->order; }

bool HardyExpr::is_const(const mpq_class& q) const {
  return n_->kind == Kind::Constant && n_->value == q;
}

bool HardyExpr::is_constant_expr() const {
  if (n_->kind == Kind::Var) return false;
  for (const auto& k : n_->kids) {
    if (!k.is_constant_expr()) return false;
  }
  return true;
}

HardyExpr constant(const mpq_class& q) {
  Node n;
  n.kind = Kind::Constant;
  n.value = q;
  n.value.canonicalize();
  return make(std::move(n));
}

HardyExpr constant(long v) { return constant(mpq_class(v)); }

HardyExpr named(NamedId id) {
  Node n;
  n.kind = Kind::Named;
  n.named = id;
  return make(std::move(n));
}

HardyExpr var() {
  Node n;
  n.kind = Kind::Var;
  return make(std::move(n));
}

HardyExpr sum(std::vector<HardyExpr> terms) {
  if (terms.empty()) return constant(0);
  if (terms.size() == 1) return terms[0];
  Node n;
  n.kind = Kind::Sum;
  n.kids = std::move(terms);
  return make(std::move(n));
}

HardyExpr product(std::vector<HardyExpr> factors) {
  if (factors.empty()) return constant(1);
  if (factors.size() == 1) return factors[0];
  Node n;
  n.kind = Kind::Product;
  n.kids = std::move(factors);
  return make(std::move(n));
}

HardyExpr quotient(HardyExpr num, HardyExpr den) {
  if (den.is_const(0)) throw DomainError("quotient with zero denominator");
  Node n;
  n.kind = Kind::Quotient;
  n.kids = {std::move(num), std::move(den)};
  return make(std::move(n));
}

HardyExpr power(HardyExpr base, HardyExpr expo) {
  Node n;
  n.kind = Kind::Power;
  n.kids = {std::move(base), std::move(expo)};
  return make(std::move(n));
}

HardyExpr exp(HardyExpr u) {
  Node n;
  n.kind = Kind::Exp;
  n.kids = {std::move(u)};
  return make(std::move(n));
}

HardyExpr log(HardyExpr u) {
  Node n;
  n.kind = Kind::Log;
  n.kids = {std::move(u)};
  return make(std::move(n));
}

HardyExpr prim(PrimId id, HardyExpr u, int order) {
  Node n;
  n.kind = Kind::Prim;
  n.prim = id;
  n.order = (id == PrimId::Polygamma || id == PrimId::ZetaDeriv) ? order : 0;
  n.kids = {std::move(u)};
  return make(std::move(n));
}

int compare(const HardyExpr& a, const HardyExpr& b) {
  if (&a.node() == &b.node()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Kind::Constant:
      return sgn(cmp(a.value(), b.value()));
    case Kind::Named:
      return a.named() == b.named() ? 0 : (a.named() < b.named() ? -1 : 1);
    case Kind::Var:
      return 0;
    case Kind::Prim:
      if (a.prim() != b.prim()) return a.prim() < b.prim() ? -1 : 1;
      if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
      break;
    default:
      break;
  }
  const auto& ka = a.kids();
  const auto& kb = b.kids();
  const std::size_t n = std::min(ka.size(), kb.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int c = compare(ka[i], kb[i]);
    if (c != 0) return c;
  }
  if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
  return 0;
}

const char* named_name(NamedId id) {
  switch (id) {
    case NamedId::Sqrt2: return "sqrt2";
    case NamedId::Sqrt3: return "sqrt3";
    case NamedId::Sqrt5: return "sqrt5";
    case NamedId::Pi: return "pi";
    case NamedId::E: return "e";
    case NamedId::Phi: return "phi";
  }
  return "?";
}

std::string prim_name(PrimId id, int order) {
  switch (id) {
    case PrimId::GammaLn: return "gamma_ln";
    case PrimId::Zeta: return "zeta";
    case PrimId::Li: return "li";
    case PrimId::SinInvLog: return "sin_inv_log";
    case PrimId::CosInvLog: return "cos_inv_log";
    case PrimId::Polygamma: return "polygamma_" + std::to_string(order);
    case PrimId::ZetaDeriv: return "zeta_d" + std::to_string(order);
  }
  return "?";
}

HardyExpr negate(const HardyExpr& e) {
  if (e.kind() == Kind::Constant) return constant(-e.value());
  if (e.kind() == Kind::Product && e.kid(0).kind() == Kind::Constant) {
    std::vector<HardyExpr> f = e.kids();
    f[0] = constant(-f[0].value());
    return product(std::move(f));
  }
  if (e.kind() == Kind::Product) {
    std::vector<HardyExpr> f{constant(-1)};
    f.insert(f.end(), e.kids().begin(), e.kids().end());
    return product(std::move(f));
  }
  return product({constant(-1), e});
}

std::size_t node_count(const HardyExpr& e) {
  std::size_t n = 1;
  for (const auto& k : e.kids()) n += node_count(k);
  return n;
}

}  // namespace hr
