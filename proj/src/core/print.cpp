#include <string>

#include "hardyrec/core/expr.hpp"

namespace hr {

namespace {

enum class Ctx { Top, SumFirst, SumRest, ProdFirst, ProdRest, QuotNum, QuotDen, PowBase, PowExp };

bool needs_parens(const HardyExpr& e, Ctx ctx) {
  switch (e.kind()) {
    case Kind::Sum:
      return ctx != Ctx::Top;
    case Kind::Product:
      return ctx == Ctx::ProdFirst || ctx == Ctx::ProdRest || ctx == Ctx::PowBase ||
             ctx == Ctx::PowExp || ctx == Ctx::QuotDen;
    case Kind::Quotient:
      return ctx == Ctx::ProdRest || ctx == Ctx::QuotDen || ctx == Ctx::PowBase || ctx == Ctx::PowExp;
    case Kind::Power:
      return ctx == Ctx::PowBase || ctx == Ctx::PowExp;
    case Kind::Constant: {
      const mpq_class& q = e.value();
      const bool integer = q.get_den() == 1;
      if (integer && q >= 0) return false;
      const bool lead_ok = ctx == Ctx::Top || ctx == Ctx::SumFirst || ctx == Ctx::ProdFirst ||
                           ctx == Ctx::QuotNum;
      if (integer) return !lead_ok;
      return !(lead_ok || ctx == Ctx::SumRest);
    }
    default:
      return false;
  }
}

// If t prints as "- u" inside a sum, returns u such that negate(u) == t.
bool negative_form(const HardyExpr& t, HardyExpr* out) {
  if (t.kind() == Kind::Constant) {
    if (t.value() < 0) {
      *out = constant(-t.value());
      return true;
    }
    return false;
  }
  if (t.kind() != Kind::Product || t.kid(0).kind() != Kind::Constant || t.kid(0).value() >= 0) {
    return false;
  }
  const mpq_class c = t.kid(0).value();
  std::vector<HardyExpr> rest(t.kids().begin() + 1, t.kids().end());
  if (c != -1) {
    rest.insert(rest.begin(), constant(-c));
    *out = product(std::move(rest));
    return true;
  }
  if (rest[0].kind() == Kind::Constant) return false;
  if (rest.size() == 1) {
    if (rest[0].kind() == Kind::Product) return false;
    *out = rest[0];
    return true;
  }
  *out = product(std::move(rest));
  return true;
}

void emit(const HardyExpr& e, Ctx ctx, std::string& out);

void emit_inner(const HardyExpr& e, std::string& out) {
  switch (e.kind()) {
    case Kind::Constant:
      out += e.value().get_str();
      return;
    case Kind::Named:
      out += named_name(e.named());
      return;
    case Kind::Var:
      out += 'x';
      return;
    case Kind::Sum: {
      emit(e.kid(0), Ctx::SumFirst, out);
      for (std::size_t i = 1; i < e.kids().size(); ++i) {
        HardyExpr u;
        if (negative_form(e.kid(i), &u)) {
          out += " - ";
          emit(u, Ctx::SumRest, out);
        } else {
          out += " + ";
          emit(e.kid(i), Ctx::SumRest, out);
        }
      }
      return;
    }
    case Kind::Product:
      emit(e.kid(0), Ctx::ProdFirst, out);
      for (std::size_t i = 1; i < e.kids().size(); ++i) {
        out += '*';
        emit(e.kid(i), Ctx::ProdRest, out);
      }
      return;
    case Kind::Quotient:
      emit(e.kid(0), Ctx::QuotNum, out);
      out += '/';
      emit(e.kid(1), Ctx::QuotDen, out);
      return;
    case Kind::Power:
      emit(e.kid(0), Ctx::PowBase, out);
      out += '^';
      emit(e.kid(1), Ctx::PowExp, out);
      return;
    case Kind::Exp:
    case Kind::Log:
    case Kind::Prim:
      out += e.kind() == Kind::Exp ? std::string("exp")
             : e.kind() == Kind::Log ? std::string("log")
                                     : prim_name(e.prim(), e.order());
      out += '(';
      emit(e.kid(0), Ctx::Top, out);
      out += ')';
      return;
  }
}

void emit(const HardyExpr& e, Ctx ctx, std::string& out) {
  if (needs_parens(e, ctx)) {
    out += '(';
    emit_inner(e, out);
    out += ')';
  } else {
    emit_inner(e, out);
  }
}

}  // namespace

std::string to_string(const HardyExpr& e) {
  std::string out;
  emit(e, Ctx::Top, out);
  return out;
}

}  // namespace hr
