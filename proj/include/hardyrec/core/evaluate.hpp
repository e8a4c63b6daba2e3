#pragma once

#include <gmpxx.h>

#include <optional>

#include "hardyrec/core/expr.hpp"
#include "hardyrec/numeric/interval.hpp"

namespace hr {

// Enclosure of e over the argument interval x, every node rounded outward at
// precision prec.  Throws DomainError outside the domain and NeedsPrecision
// when an enclosure touches a singularity.
Interval eval_interval(const HardyExpr& e, const Interval& x, mpfr_prec_t prec);

Interval named_value(NamedId id, mpfr_prec_t prec);

// Exact value when every node evaluates to a rational at the rational point x
// (rational powers with exact roots, log(u)/log(v) with u an integer power of v).
std::optional<mpq_class> exact_value(const HardyExpr& e, const mpq_class& x);

}  // namespace hr
