#pragma once

#include <cstdint>

#include "horn/term.hpp"

namespace horn {

/// Evaluates an integer expression: + - * / mod, unary minus, and
/// integer(sqrt(E)) as the exact floor square root. `/` truncates toward
/// zero; `mod` takes the sign of the divisor. Throws MachineError with
/// instantiation_error, type_error or arith_error.
int64_t eval_arith(const Term& expr);

/// Largest r with r*r <= n, for n >= 0.
int64_t isqrt(int64_t n);

}  // namespace horn
