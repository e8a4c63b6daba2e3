#pragma once

#include <gmpxx.h>

#include <utility>
#include <vector>

#include "hardyrec/core/expr.hpp"

namespace hr::recur::detail {

// {f(n)} in the closed interval [lo, hi], certified.
bool frac_in(const HardyExpr& f, const mpz_class& n, const mpq_class& lo, const mpq_class& hi);

// Rejects an empty, malformed or full target set.
void check_target(const std::vector<std::pair<mpq_class, mpq_class>>& B);

}  // namespace hr::recur::detail
