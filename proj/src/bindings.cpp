#include "horn/bindings.hpp"

#include <unordered_set>
#include <utility>

namespace horn {

void Bindings::undo(size_t mark) {
  while (entries_.size() > mark) {
    auto* v = static_cast<detail::VarCell*>(entries_.back().cell_);
    v->value = Term();
    v->bound = false;
    entries_.pop_back();
  }
}

void Bindings::bind(const Term& var, const Term& value) {
  auto* v = static_cast<detail::VarCell*>(var.cell_);
  v->value = value;
  v->bound = true;
  if (v->serial < record_below_) entries_.push_back(var);
}

void Bindings::forget_above(size_t mark, uint64_t keep_below) {
  size_t out = mark;
  for (size_t i = mark; i < entries_.size(); ++i) {
    if (entries_[i].serial() < keep_below) {
      if (out != i) entries_[out] = std::move(entries_[i]);
      ++out;
    }
  }
  entries_.resize(out);
}

bool unify(const Term& a, const Term& b, Bindings& bindings) {
  const size_t mark = bindings.mark();
  std::vector<std::pair<const Term*, const Term*>> todo;
  todo.emplace_back(&a, &b);
  while (!todo.empty()) {
    auto [x, y] = todo.back();
    todo.pop_back();
    const Term& dx = x->deref();
    const Term& dy = y->deref();
    if (dx.same_cell(dy)) continue;
    if (dx.is_var()) {
      // point the younger variable at the older one
      if (dy.is_var() && dy.serial() > dx.serial())
        bindings.bind(dy, dx);
      else
        bindings.bind(dx, dy);
      continue;
    }
    if (dy.is_var()) {
      bindings.bind(dy, dx);
      continue;
    }
    if (dx.tag() != dy.tag()) {
      bindings.undo(mark);
      return false;
    }
    switch (dx.tag()) {
      case Tag::Atom:
        if (dx.symbol() != dy.symbol()) {
          bindings.undo(mark);
          return false;
        }
        break;
      case Tag::Int:
        if (dx.int_value() != dy.int_value()) {
          bindings.undo(mark);
          return false;
        }
        break;
      case Tag::Compound: {
        if (dx.functor() != dy.functor() || dx.arity() != dy.arity()) {
          bindings.undo(mark);
          return false;
        }
        auto xs = dx.args();
        auto ys = dy.args();
        for (size_t i = xs.size(); i-- > 0;) todo.emplace_back(&xs[i], &ys[i]);
        break;
      }
      case Tag::Var:
        break;
    }
  }
  return true;
}

bool identical(const Term& a, const Term& b) {
  std::vector<std::pair<const Term*, const Term*>> todo;
  todo.emplace_back(&a, &b);
  while (!todo.empty()) {
    auto [x, y] = todo.back();
    todo.pop_back();
    const Term& dx = x->deref();
    const Term& dy = y->deref();
    if (dx.tag() != dy.tag()) return false;
    switch (dx.tag()) {
      case Tag::Var:
        if (!dx.same_cell(dy)) return false;
        break;
      case Tag::Atom:
        if (dx.symbol() != dy.symbol()) return false;
        break;
      case Tag::Int:
        if (dx.int_value() != dy.int_value()) return false;
        break;
      case Tag::Compound: {
        if (dx.same_cell(dy)) break;
        if (dx.functor() != dy.functor() || dx.arity() != dy.arity()) return false;
        auto xs = dx.args();
        auto ys = dy.args();
        for (size_t i = xs.size(); i-- > 0;) todo.emplace_back(&xs[i], &ys[i]);
        break;
      }
    }
  }
  return true;
}

Term TermCopier::operator()(const Term& t) {
  Term out;
  copy_into(t, &out);
  return out;
}

// Recurses on all but the last argument and loops on the last one, so list
// spines are copied iteratively.
void TermCopier::copy_into(const Term& src, Term* dest) {
  const Term* from = &src;
  for (;;) {
    const Term& t = from->deref();
    switch (t.tag()) {
      case Tag::Atom:
      case Tag::Int:
        *dest = t;
        return;
      case Tag::Var: {
        auto [it, fresh] = vars_.try_emplace(t.identity());
        if (fresh) it->second = Term::var(serials_);
        *dest = it->second;
        return;
      }
      case Tag::Compound: {
        if (share_immortal_ && t.is_shared_ground()) {
          *dest = t;
          return;
        }
        auto args = t.args();
        std::vector<Term> copied(args.size());
        for (size_t i = 0; i + 1 < args.size(); ++i) copy_into(args[i], &copied[i]);
        *dest = Term::compound(t.functor(), copied);
        // dest now owns the new cell; fill its last slot in place
        dest = const_cast<Term*>(&dest->arg(args.size() - 1));
        from = &args.back();
        break;
      }
    }
  }
}

bool is_cyclic(const Term& t) {
  struct Frame {
    const Term* term;
    size_t next;
  };
  std::unordered_set<const void*> on_path;
  std::unordered_set<const void*> finished;
  std::vector<Frame> stack;

  const Term& root = t.deref();
  if (!root.is_compound()) return false;
  stack.push_back({&root, 0});
  on_path.insert(root.identity());
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next == f.term->arity()) {
      on_path.erase(f.term->identity());
      finished.insert(f.term->identity());
      stack.pop_back();
      continue;
    }
    const Term& child = f.term->arg(f.next++).deref();
    if (!child.is_compound() || child.is_shared_ground()) continue;
    if (on_path.count(child.identity())) return true;
    if (finished.count(child.identity())) continue;
    on_path.insert(child.identity());
    stack.push_back({&child, 0});
  }
  return false;
}

}  // namespace horn
