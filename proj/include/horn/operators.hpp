#pragma once

#include <optional>

#include "horn/symbol.hpp"

namespace horn {

enum class OpType { xfx, xfy, yfx, fy, fx };

struct OpDef {
  int priority;
  OpType type;

  int left_max() const { return type == OpType::yfx ? priority : priority - 1; }
  int right_max() const { return type == OpType::xfy || type == OpType::fy ? priority : priority - 1; }
};

// The operator table is fixed; programs cannot declare their own.
std::optional<OpDef> infix_op(Symbol name);
std::optional<OpDef> prefix_op(Symbol name);

inline bool is_operator(Symbol name) { return infix_op(name) || prefix_op(name); }

}  // namespace horn
