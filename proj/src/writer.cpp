#include "horn/writer.hpp"

#include <cctype>
#include <climits>
#include <cstring>

#include "horn/bindings.hpp"
#include "horn/operators.hpp"

namespace horn {
namespace {

bool is_symbol_char(char c) { return c != '\0' && std::strchr("+-*/\\^<>=~:.?@#&$", c) != nullptr; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool needs_quotes(std::string_view s) {
  if (s.empty()) return true;
  if (s == "[]" || s == "!" || s == ";" || s == "{}") return false;
  if (std::islower(static_cast<unsigned char>(s[0]))) {
    for (char c : s)
      if (!is_alnum(c)) return true;
    return false;
  }
  if (s == ".") return true;
  for (char c : s)
    if (!is_symbol_char(c)) return true;
  return false;
}

class Writer {
 public:
  Writer(const WriteOptions& opts, bool cyclic)
      : opts_(opts), limit_(cyclic ? opts.cyclic_depth : INT_MAX), budget_(cyclic ? kCyclicBudget : INT64_MAX) {}

  void write(const Term& term, int max_prec, bool operand, int depth) {
    const Term& t = term.deref();
    // a branching cycle would otherwise print exponentially many nodes
    if (depth > limit_ || --budget_ < 0) {
      emit("...");
      return;
    }
    switch (t.tag()) {
      case Tag::Var:
        emit("_G" + std::to_string(t.serial()));
        return;
      case Tag::Int:
        emit(std::to_string(t.int_value()));
        return;
      case Tag::Atom:
        write_atom(t.symbol(), operand);
        return;
      case Tag::Compound:
        write_compound(t, max_prec, depth);
        return;
    }
  }

  std::string take() { return std::move(out_); }

 private:
  void emit(std::string_view tok) {
    if (!out_.empty() && !tok.empty()) {
      char a = out_.back(), b = tok.front();
      if ((is_alnum(a) && is_alnum(b)) || (is_symbol_char(a) && is_symbol_char(b)) ||
          (after_op_ && b == '('))
        out_ += ' ';
    }
    out_ += tok;
    after_op_ = false;
  }

  void emit_op(Symbol name, bool prefix) {
    emit(name == atom::comma ? std::string(",") : name_text(name));
    // `- (a,b)` must not read back as the compound -(a,b)
    after_op_ = prefix;
  }

  std::string name_text(Symbol s) const { return opts_.quoted ? quote_atom(s) : std::string(s.text()); }

  void write_atom(Symbol s, bool operand) {
    if (operand && is_operator(s)) {
      emit("(");
      emit(name_text(s));
      emit(")");
      return;
    }
    emit(name_text(s));
  }

  void write_compound(const Term& t, int max_prec, int depth) {
    Symbol f = t.functor();
    size_t n = t.arity();
    if (f == atom::dot && n == 2) {
      write_list(t, depth);
      return;
    }
    if (f == atom::curly && n == 1) {
      emit("{");
      write(t.arg(0), 1200, false, depth + 1);
      emit("}");
      return;
    }
    if (n == 2) {
      if (auto op = infix_op(f)) {
        bool parens = op->priority > max_prec;
        if (parens) emit("(");
        write(t.arg(0), op->left_max(), true, depth + 1);
        emit_op(f, false);
        write(t.arg(1), op->right_max(), true, depth + 1);
        if (parens) emit(")");
        return;
      }
    }
    if (n == 1) {
      auto op = prefix_op(f);
      const Term& x = t.arg(0).deref();
      // -(1) must not read back as the integer -1
      if (op && !(x.is_int() && x.int_value() >= 0)) {
        bool parens = op->priority > max_prec;
        if (parens) emit("(");
        emit_op(f, true);
        write(x, op->right_max(), true, depth + 1);
        if (parens) emit(")");
        return;
      }
    }
    emit(name_text(f));
    emit("(");
    for (size_t i = 0; i < n; ++i) {
      if (i) emit(",");
      write(t.arg(i), 999, false, depth + 1);
    }
    emit(")");
  }

  void write_list(const Term& list, int depth) {
    emit("[");
    const Term* cell = &list;
    bool first = true;
    for (;;) {
      if (!first) emit(",");
      first = false;
      write(cell->arg(0), 999, false, depth + 1);
      const Term& tail = cell->arg(1).deref();
      if (tail.has_functor(atom::dot, 2)) {
        if (++depth > limit_) {
          emit("|");
          emit("...");
          break;
        }
        cell = &tail;
        continue;
      }
      if (!tail.is_atom(atom::nil)) {
        emit("|");
        write(tail, 999, false, depth + 1);
      }
      break;
    }
    emit("]");
  }

  static constexpr int64_t kCyclicBudget = 10000;

  const WriteOptions& opts_;
  int limit_;
  int64_t budget_;
  std::string out_;
  bool after_op_ = false;
};

}  // namespace

std::string quote_atom(Symbol s) {
  std::string_view text = s.text();
  if (!needs_quotes(text)) return std::string(text);
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') out += '\'';
    out += c;
  }
  out += '\'';
  return out;
}

std::string write_term(const Term& t, const WriteOptions& options) {
  Writer w(options, is_cyclic(t));
  w.write(t, 1200, false, 0);
  return w.take();
}

}  // namespace horn
