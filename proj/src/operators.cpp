#include "horn/operators.hpp"

namespace horn {

std::optional<OpDef> infix_op(Symbol name) {
  switch (name.id()) {
    case atom::neck_index:
      return OpDef{1200, OpType::xfx};
    case atom::comma_index:
      return OpDef{1000, OpType::xfy};
    case atom::unify_index:
    case atom::not_unify_index:
    case atom::identical_index:
    case atom::not_identical_index:
    case atom::is_index:
    case atom::arith_eq_index:
    case atom::arith_ne_index:
    case atom::less_index:
    case atom::greater_index:
    case atom::less_eq_index:
    case atom::greater_eq_index:
    case atom::arrow_index:
      return OpDef{700, OpType::xfx};
    case atom::plus_index:
    case atom::minus_index:
      return OpDef{500, OpType::yfx};
    case atom::times_index:
    case atom::divide_index:
    case atom::mod_index:
      return OpDef{400, OpType::yfx};
    default:
      return std::nullopt;
  }
}

std::optional<OpDef> prefix_op(Symbol name) {
  if (name == atom::neck) return OpDef{1200, OpType::fx};
  if (name == atom::minus) return OpDef{200, OpType::fy};
  return std::nullopt;
}

}  // namespace horn
