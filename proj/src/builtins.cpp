#include "horn/arith.hpp"
#include "horn/machine.hpp"

namespace horn {
namespace {

template <typename Compare>
Builtin arith_compare(Compare cmp) {
  return [cmp](Machine&, std::span<const Term> a) { return cmp(eval_arith(a[0]), eval_arith(a[1])); };
}

template <typename Test>
Builtin type_test(Test test) {
  return [test](Machine&, std::span<const Term> a) { return test(a[0].deref()); };
}

}  // namespace

void install_core_builtins(Program& p) {
  p.define("=", 2, [](Machine& m, std::span<const Term> a) { return m.unify(a[0], a[1]); });
  p.define("\\=", 2, [](Machine& m, std::span<const Term> a) { return !m.unifiable(a[0], a[1]); });
  p.define("==", 2, [](Machine&, std::span<const Term> a) { return identical(a[0], a[1]); });
  p.define("\\==", 2, [](Machine&, std::span<const Term> a) { return !identical(a[0], a[1]); });

  p.define("is", 2, [](Machine& m, std::span<const Term> a) {
    return m.unify(a[0], Term::integer(eval_arith(a[1])));
  });
  p.define("=:=", 2, arith_compare([](int64_t x, int64_t y) { return x == y; }));
  p.define("=\\=", 2, arith_compare([](int64_t x, int64_t y) { return x != y; }));
  p.define("<", 2, arith_compare([](int64_t x, int64_t y) { return x < y; }));
  p.define(">", 2, arith_compare([](int64_t x, int64_t y) { return x > y; }));
  p.define("=<", 2, arith_compare([](int64_t x, int64_t y) { return x <= y; }));
  p.define(">=", 2, arith_compare([](int64_t x, int64_t y) { return x >= y; }));

  p.define("var", 1, type_test([](const Term& t) { return t.is_var(); }));
  p.define("nonvar", 1, type_test([](const Term& t) { return !t.is_var(); }));
  p.define("atom", 1, type_test([](const Term& t) { return t.is_atom(); }));
  p.define("integer", 1, type_test([](const Term& t) { return t.is_int(); }));
  p.define("atomic", 1, type_test([](const Term& t) { return t.is_atom() || t.is_int(); }));
  p.define("compound", 1, type_test([](const Term& t) { return t.is_compound(); }));
  p.define("callable", 1, type_test([](const Term& t) { return t.is_callable(); }));
}

}  // namespace horn
