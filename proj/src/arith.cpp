#include "horn/arith.hpp"

#include <limits>

#include "horn/error.hpp"
#include "horn/writer.hpp"

namespace horn {

int64_t isqrt(int64_t n) {
  if (n < 2) return n;
  // Newton's iteration from above converges to the floor root
  uint64_t x = static_cast<uint64_t>(n);
  uint64_t y = (x + 1) / 2;
  while (y < x) {
    x = y;
    y = (x + static_cast<uint64_t>(n) / x) / 2;
  }
  return static_cast<int64_t>(x);
}

namespace {

[[noreturn]] void overflow(const Term& e) { throw MachineError(ErrorKind::arith_error, "integer overflow", e); }

int64_t eval(const Term& expr) {
  const Term& e = expr.deref();
  switch (e.tag()) {
    case Tag::Int:
      return e.int_value();
    case Tag::Var:
      throw MachineError(ErrorKind::instantiation_error, "arithmetic on an unbound variable", e);
    case Tag::Atom:
      throw MachineError(ErrorKind::type_error, "not evaluable: " + write_term(e), e);
    case Tag::Compound:
      break;
  }
  Symbol f = e.functor();
  if (e.arity() == 1) {
    if (f == atom::minus) {
      int64_t x = eval(e.arg(0));
      if (x == std::numeric_limits<int64_t>::min()) overflow(e);
      return -x;
    }
    if (f == atom::integer) {
      const Term& inner = e.arg(0).deref();
      if (inner.has_functor(atom::sqrt, 1)) {
        int64_t x = eval(inner.arg(0));
        if (x < 0) throw MachineError(ErrorKind::arith_error, "square root of a negative number", e);
        return isqrt(x);
      }
      return eval(inner);
    }
  }
  if (e.arity() == 2) {
    int64_t x = eval(e.arg(0));
    int64_t y = eval(e.arg(1));
    int64_t r = 0;
    switch (f.id()) {
      case atom::plus_index:
        if (__builtin_add_overflow(x, y, &r)) overflow(e);
        return r;
      case atom::minus_index:
        if (__builtin_sub_overflow(x, y, &r)) overflow(e);
        return r;
      case atom::times_index:
        if (__builtin_mul_overflow(x, y, &r)) overflow(e);
        return r;
      case atom::divide_index:
        if (y == 0) throw MachineError(ErrorKind::arith_error, "division by zero", e);
        if (x == std::numeric_limits<int64_t>::min() && y == -1) overflow(e);
        return x / y;
      case atom::mod_index: {
        if (y == 0) throw MachineError(ErrorKind::arith_error, "division by zero", e);
        if (y == -1) return 0;
        int64_t m = x % y;
        if (m != 0 && ((m < 0) != (y < 0))) m += y;
        return m;
      }
      default:
        break;
    }
  }
  throw MachineError(ErrorKind::type_error,
                     "not evaluable: " + std::string(f.text()) + "/" + std::to_string(e.arity()), e);
}

}  // namespace

int64_t eval_arith(const Term& expr) { return eval(expr); }

}  // namespace horn
