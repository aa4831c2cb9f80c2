#include "horn/term.hpp"

#include <atomic>
#include <new>
#include <utility>
#include <vector>

namespace horn {
namespace detail {
namespace {

std::atomic<int64_t> g_live_cells{0};

size_t compound_bytes(uint32_t arity) { return sizeof(CompoundCell) + arity * sizeof(Term); }

struct Pending {
  Cell* cell;
  Tag tag;
};

// Destruction is iterative: long lists and binding chains would otherwise
// recurse once per cell.
thread_local std::vector<Pending> t_pending;
thread_local bool t_draining = false;

}  // namespace

CompoundCell* CompoundCell::allocate(Symbol functor, uint32_t arity) {
  void* raw = ::operator new(compound_bytes(arity));
  auto* c = new (raw) CompoundCell();
  c->functor = functor;
  c->arity = arity;
  for (uint32_t i = 0; i < arity; ++i) new (c->args() + i) Term();
  g_live_cells.fetch_add(1, std::memory_order_relaxed);
  return c;
}

int64_t live_cells() { return g_live_cells.load(std::memory_order_relaxed); }

}  // namespace detail

// Drops t's reference; a cell reaching zero is queued instead of destroyed
// recursively. t is left as [] either way.
void release_cells(Term& t) {
  if (t.has_cell() && t.cell_->refs != detail::kImmortal && --t.cell_->refs == 0)
    detail::t_pending.push_back({t.cell_, t.tag_});
  t.tag_ = Tag::Atom;
  t.int_ = 0;
}

namespace detail {

void destroy_cell(Cell* cell, Tag tag) {
  t_pending.push_back({cell, tag});
  if (t_draining) return;
  t_draining = true;
  while (!t_pending.empty()) {
    Pending p = t_pending.back();
    t_pending.pop_back();
    if (p.tag == Tag::Var) {
      auto* v = static_cast<VarCell*>(p.cell);
      release_cells(v->value);
      delete v;
    } else {
      auto* c = static_cast<CompoundCell*>(p.cell);
      uint32_t arity = c->arity;
      for (uint32_t i = 0; i < arity; ++i) {
        release_cells(c->args()[i]);
        c->args()[i].~Term();
      }
      c->~CompoundCell();
      ::operator delete(c, compound_bytes(arity));
    }
    g_live_cells.fetch_sub(1, std::memory_order_relaxed);
  }
  t_draining = false;
}

}  // namespace detail

Term Term::var(VarSerials& serials) {
  auto* v = new detail::VarCell();
  v->serial = serials.next();
  detail::g_live_cells.fetch_add(1, std::memory_order_relaxed);
  Term t;
  t.tag_ = Tag::Var;
  t.cell_ = v;
  return t;
}

Term Term::compound(Symbol functor, std::span<const Term> args) {
  if (args.empty()) return atom(functor);
  auto* c = detail::CompoundCell::allocate(functor, static_cast<uint32_t>(args.size()));
  for (size_t i = 0; i < args.size(); ++i) c->args()[i] = args[i];
  Term t;
  t.tag_ = Tag::Compound;
  t.cell_ = c;
  return t;
}

Term Term::list(std::span<const Term> items, Term tail) {
  Term result = std::move(tail);
  for (size_t i = items.size(); i-- > 0;) result = cons(items[i], std::move(result));
  return result;
}

}  // namespace horn
