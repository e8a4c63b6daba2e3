#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <vector>

namespace hr {

enum class Kind { Constant, Named, Var, Sum, Product, Quotient, Power, Exp, Log, Prim };

enum class NamedId { Sqrt2, Sqrt3, Sqrt5, Pi, E, Phi };

// Built-in primitives.  CosInvLog, Polygamma and ZetaDeriv arise from
// differentiating the user-facing ones.
enum class PrimId { GammaLn, Zeta, Li, SinInvLog, CosInvLog, Polygamma, ZetaDeriv };

struct Node;

// Immutable expression tree in the variable x; copies share structure.
class HardyExpr {
 public:
  HardyExpr() = default;
  explicit HardyExpr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

  const Node& node() const { return *n_; }
  Kind kind() const;
  const std::vector<HardyExpr>& kids() const;
  const HardyExpr& kid(std::size_t i) const { return kids()[i]; }
  const mpq_class& value() const;  // Constant only
  NamedId named() const;
  PrimId prim() const;
  int order() const;  // Polygamma k, ZetaDeriv j

  bool valid() const { return n_ != nullptr; }
  bool is_const(const mpq_class& q) const;
  // True when the tree contains no variable.
  bool is_constant_expr() const;

 private:
  std::shared_ptr<const Node> n_;
};

struct Node {
  Kind kind = Kind::Constant;
  mpq_class value;
  NamedId named = NamedId::Pi;
  PrimId prim = PrimId::GammaLn;
  int order = 0;
  std::vector<HardyExpr> kids;
};

HardyExpr constant(const mpq_class& q);
HardyExpr constant(long v);
HardyExpr named(NamedId id);
HardyExpr var();
HardyExpr sum(std::vector<HardyExpr> terms);
HardyExpr product(std::vector<HardyExpr> factors);
HardyExpr quotient(HardyExpr num, HardyExpr den);
HardyExpr power(HardyExpr base, HardyExpr expo);
HardyExpr exp(HardyExpr u);
HardyExpr log(HardyExpr u);
HardyExpr prim(PrimId id, HardyExpr u, int order = 0);

// Structural comparison: a total order on trees, used for canonical forms.
int compare(const HardyExpr& a, const HardyExpr& b);
inline bool operator==(const HardyExpr& a, const HardyExpr& b) { return compare(a, b) == 0; }
inline bool operator!=(const HardyExpr& a, const HardyExpr& b) { return compare(a, b) != 0; }
inline bool operator<(const HardyExpr& a, const HardyExpr& b) { return compare(a, b) < 0; }

const char* named_name(NamedId id);
std::string prim_name(PrimId id, int order);

HardyExpr parse(const std::string& text);
std::string to_string(const HardyExpr& e);

// Canonical form: flattened, constants folded, like terms and powers merged,
// children sorted.  Idempotent.
HardyExpr simplify(const HardyExpr& e);
HardyExpr differentiate(const HardyExpr& e, int order = 1);

// Negation as produced by the parser's unary minus.
HardyExpr negate(const HardyExpr& e);

std::size_t node_count(const HardyExpr& e);

}  // namespace hr
