#pragma once

#include <gmpxx.h>

#include "hardyrec/numeric/interval.hpp"

namespace hr {

// B_{2j} for j = 0..count-1, exact.
const mpq_class& bernoulli_even(int j);

// Enclosures of special functions over a whole interval argument.
Interval lngamma(const Interval& x);            // x > 0
Interval polygamma(int k, const Interval& x);   // psi^{(k)}, k >= 0, x > 0
Interval zeta_deriv(int j, const Interval& s);  // zeta^{(j)}, s > 1
Interval eint(const Interval& x);               // Ei, x > 0
Interval li2(const Interval& u);                // integral of 1/log t over [2, u], u > 1

}  // namespace hr
