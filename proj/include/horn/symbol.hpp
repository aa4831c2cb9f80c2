#pragma once

#include <cstdint>
#include <string_view>

namespace horn {

/// Interned atom/functor name. Equal text always yields the same id, and the
/// table is shared by every engine and thread in the process.
class Symbol {
 public:
  constexpr Symbol() = default;
  constexpr explicit Symbol(uint32_t id) : id_(id) {}

  static Symbol intern(std::string_view text);

  /// The view stays valid for the lifetime of the process.
  std::string_view text() const;
  constexpr uint32_t id() const { return id_; }

  friend constexpr bool operator==(Symbol, Symbol) = default;

 private:
  uint32_t id_ = 0;
};

// Atoms the runtime dispatches on. The table is seeded in this order, so the
// ids are compile-time constants.
#define HORN_WELL_KNOWN_ATOMS(X) \
  X(nil, "[]")                   \
  X(dot, ".")                    \
  X(comma, ",")                  \
  X(neck, ":-")                  \
  X(true_, "true")               \
  X(fail, "fail")                \
  X(false_, "false")             \
  X(the, "the")                  \
  X(no, "no")                    \
  X(call, "call")                \
  X(cut, "!")                    \
  X(bar, "|")                    \
  X(plus, "+")                   \
  X(minus, "-")                  \
  X(times, "*")                  \
  X(divide, "/")                 \
  X(mod, "mod")                  \
  X(unify, "=")                  \
  X(not_unify, "\\=")            \
  X(identical, "==")             \
  X(not_identical, "\\==")       \
  X(is, "is")                    \
  X(arith_eq, "=:=")             \
  X(arith_ne, "=\\=")            \
  X(less, "<")                   \
  X(greater, ">")                \
  X(less_eq, "=<")               \
  X(greater_eq, ">=")            \
  X(arrow, "=>")                 \
  X(integer, "integer")          \
  X(sqrt, "sqrt")                \
  X(var, "var")                  \
  X(nonvar, "nonvar")            \
  X(between, "between")          \
  X(return_, "return")           \
  X(from_engine, "from_engine")  \
  X(exception, "exception")      \
  X(engine_tag, "$engine")       \
  X(hub_tag, "$hub")             \
  X(thread_tag, "$thread")       \
  X(answer_tag, "$answer")       \
  X(yes, "yes")                  \
  X(curly, "{}")

namespace atom {
enum Index : uint32_t {
#define HORN_ATOM_INDEX(name, text) name##_index,
  HORN_WELL_KNOWN_ATOMS(HORN_ATOM_INDEX)
#undef HORN_ATOM_INDEX
  well_known_count
};

#define HORN_ATOM_CONST(name, text) inline constexpr Symbol name{name##_index};
HORN_WELL_KNOWN_ATOMS(HORN_ATOM_CONST)
#undef HORN_ATOM_CONST
}  // namespace atom

}  // namespace horn
