#pragma once

#include <gmpxx.h>

#include <utility>

namespace groupoidkit {

using Integer = mpz_class;
// Non-negative by convention; index sets of R = N x N use N = {0, 1, 2, ...}.
using Natural = mpz_class;

// Cantor pairing N x N -> N, (a, b) -> (a + b)(a + b + 1)/2 + b.
Natural pair(const Natural& a, const Natural& b);
std::pair<Natural, Natural> unpair(const Natural& n);

}  // namespace groupoidkit
