#include "horn/database.hpp"

#include <stdexcept>

namespace horn {

ImmortalArena::~ImmortalArena() {
  for (auto [cell, tag] : cells_) {
    if (tag == Tag::Var) {
      delete static_cast<detail::VarCell*>(cell);
    } else {
      auto* c = static_cast<detail::CompoundCell*>(cell);
      uint32_t arity = c->arity;
      // arguments are immortal or immediate, and may point at cells already
      // freed above, so their destructors are skipped
      c->~CompoundCell();
      ::operator delete(c, sizeof(detail::CompoundCell) + arity * sizeof(Term));
    }
  }
}

Term ImmortalArena::freeze(const Term& src, std::unordered_map<const void*, uint32_t>& slots) {
  const Term& t = src.deref();
  switch (t.tag()) {
    case Tag::Atom:
    case Tag::Int:
      return t;
    case Tag::Var: {
      auto [it, fresh] = slots.try_emplace(t.identity(), static_cast<uint32_t>(slots.size()));
      auto* v = new detail::VarCell();
      v->refs = detail::kImmortal;
      v->slot = it->second;
      cells_.emplace_back(v, Tag::Var);
      Term out;
      out.tag_ = Tag::Var;
      out.cell_ = v;
      return out;
    }
    case Tag::Compound: {
      auto* c = detail::CompoundCell::allocate(t.functor(), static_cast<uint32_t>(t.arity()));
      bool ground = true;
      for (size_t i = 0; i < t.arity(); ++i) {
        Term a = freeze(t.arg(i), slots);
        if (a.is_var() || (a.is_compound() && !a.is_shared_ground())) ground = false;
        c->args()[i] = std::move(a);
      }
      c->ground = ground;
      c->refs = detail::kImmortal;
      cells_.emplace_back(c, Tag::Compound);
      Term out;
      out.tag_ = Tag::Compound;
      out.cell_ = c;
      return out;
    }
  }
  return t;
}

namespace {

void flatten_body(const Term& body, std::vector<Term>& goals) {
  const Term& b = body.deref();
  if (b.has_functor(atom::comma, 2)) {
    flatten_body(b.arg(0), goals);
    flatten_body(b.arg(1), goals);
  } else if (b.is_atom(atom::true_)) {
    return;
  } else if (b.is_var()) {
    goals.push_back(Term::compound(atom::call, {b}));
  } else {
    goals.push_back(b);
  }
}

}  // namespace

void Database::add(const SourceClause& src) {
  if (frozen_) throw std::logic_error("the clause database is frozen once engines exist");
  const Term& head = src.head.deref();
  if (!head.is_callable()) throw std::invalid_argument("clause head must be callable");

  std::vector<Term> goals;
  flatten_body(src.body, goals);

  std::unordered_map<const void*, uint32_t> slots;
  Clause clause;
  clause.head = arena_.freeze(head, slots);
  for (const Term& g : goals) clause.body.push_back(arena_.freeze(g, slots));
  clause.frame_size = static_cast<uint32_t>(slots.size());
  clause.origin = src.origin;
  clause.line = src.line;

  auto key = predicate_key(head.functor(), head.arity());
  auto [it, fresh] = preds_.try_emplace(key);
  if (fresh) {
    it->second.name = head.functor();
    it->second.arity = head.arity();
  }
  it->second.clauses.push_back(std::move(clause));
}

const Predicate* Database::lookup(Symbol name, size_t arity) const { return lookup(predicate_key(name, arity)); }

const Predicate* Database::lookup(PredicateKey key) const {
  auto it = preds_.find(key);
  return it == preds_.end() ? nullptr : &it->second;
}

Term Renamer::operator()(const Term& tmpl) {
  Term out;
  rename_into(tmpl, &out);
  return out;
}

void Renamer::rename_into(const Term& src, Term* dest) {
  const Term* from = &src;
  for (;;) {
    const Term& t = *from;
    switch (t.tag()) {
      case Tag::Atom:
      case Tag::Int:
        *dest = t;
        return;
      case Tag::Var: {
        auto slot = static_cast<const detail::VarCell*>(t.identity())->slot;
        Term& v = slots_[slot];
        if (!v.is_var()) v = Term::var(serials_);
        *dest = v;
        return;
      }
      case Tag::Compound: {
        if (t.is_shared_ground()) {
          *dest = t;
          return;
        }
        auto args = t.args();
        std::vector<Term> out(args.size());
        for (size_t i = 0; i + 1 < args.size(); ++i) rename_into(args[i], &out[i]);
        *dest = Term::compound(t.functor(), out);
        dest = const_cast<Term*>(&dest->arg(args.size() - 1));
        from = &args.back();
        break;
      }
    }
  }
}

}  // namespace horn
