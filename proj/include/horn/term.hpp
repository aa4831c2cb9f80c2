#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>

#include "horn/symbol.hpp"

namespace horn {

enum class Tag : uint8_t { Var, Atom, Int, Compound };

/// Source of variable serial numbers. Each engine owns one; serials are only
/// compared within the engine that issued them.
class VarSerials {
 public:
  constexpr VarSerials() = default;
  constexpr explicit VarSerials(uint64_t first) : next_(first) {}
  uint64_t next() { return next_++; }
  uint64_t peek() const { return next_; }

 private:
  uint64_t next_ = 1;
};

namespace detail {
struct Cell;
struct VarCell;
struct CompoundCell;
}  // namespace detail

/// A logical term. Atoms and integers are immediate; variables and compounds
/// are reference-counted cells. Cells are confined to one thread at a time:
/// terms cross engine and thread boundaries only as copies.
class Term {
 public:
  Term() noexcept : tag_(Tag::Atom), sym_(0) {}
  Term(const Term& other) noexcept;
  Term(Term&& other) noexcept;
  Term& operator=(const Term& other) noexcept;
  Term& operator=(Term&& other) noexcept;
  ~Term();

  static Term atom(Symbol s) {
    Term t;
    t.sym_ = s.id();
    return t;
  }
  static Term atom(std::string_view text) { return atom(Symbol::intern(text)); }
  static Term integer(int64_t v) {
    Term t;
    t.tag_ = Tag::Int;
    t.int_ = v;
    return t;
  }
  static Term var(VarSerials& serials);
  static Term compound(Symbol functor, std::span<const Term> args);
  static Term compound(Symbol functor, std::initializer_list<Term> args) {
    return compound(functor, std::span<const Term>(args.begin(), args.size()));
  }
  static Term compound(std::string_view functor, std::initializer_list<Term> args) {
    return compound(Symbol::intern(functor), args);
  }
  static Term nil() { return atom(atom::nil); }
  static Term cons(Term head, Term tail) { return compound(atom::dot, {std::move(head), std::move(tail)}); }
  static Term list(std::span<const Term> items, Term tail = nil());

  Tag tag() const { return tag_; }
  bool is_var() const { return tag_ == Tag::Var; }
  bool is_atom() const { return tag_ == Tag::Atom; }
  bool is_int() const { return tag_ == Tag::Int; }
  bool is_compound() const { return tag_ == Tag::Compound; }
  bool is_atom(Symbol s) const { return tag_ == Tag::Atom && sym_ == s.id(); }
  bool is_callable() const { return tag_ == Tag::Atom || tag_ == Tag::Compound; }

  Symbol symbol() const { return Symbol(sym_); }
  int64_t int_value() const { return int_; }

  /// Functor of a compound or the name of an atom.
  Symbol functor() const;
  /// 0 for atoms.
  size_t arity() const;
  bool has_functor(Symbol f, size_t n) const { return is_callable() && functor() == f && arity() == n; }
  const Term& arg(size_t i) const;
  std::span<const Term> args() const;

  // Variables.
  bool is_bound() const;
  uint64_t serial() const;

  /// Follows variable bindings to an unbound variable or a non-variable term.
  /// The result lives as long as *this does.
  const Term& deref() const;

  /// Identity of the underlying cell; equal for the same variable.
  const void* identity() const { return cell_; }
  bool same_cell(const Term& other) const;

  /// Immortal cells belong to a frozen clause database and may be shared
  /// across threads.
  bool is_immortal() const;
  /// True for immortal compounds known to contain no variables.
  bool is_shared_ground() const;

 private:
  friend struct detail::VarCell;
  friend struct detail::CompoundCell;
  friend class Bindings;
  friend class ImmortalArena;
  friend void release_cells(Term& t);

  bool has_cell() const { return tag_ == Tag::Var || tag_ == Tag::Compound; }
  void retain() const;
  void release();

  Tag tag_;
  union {
    uint32_t sym_;
    int64_t int_;
    detail::Cell* cell_;
  };
};

namespace detail {

inline constexpr uint32_t kImmortal = 0xFFFFFFFFu;
inline constexpr uint32_t kNoSlot = 0xFFFFFFFFu;

struct Cell {
  uint32_t refs = 1;
};

struct VarCell : Cell {
  Term value;
  uint64_t serial = 0;
  /// Index into a clause's variable frame for database templates.
  uint32_t slot = kNoSlot;
  bool bound = false;
};

struct alignas(8) CompoundCell : Cell {
  Symbol functor;
  uint32_t arity = 0;
  bool ground = false;

  Term* args() { return reinterpret_cast<Term*>(this + 1); }
  const Term* args() const { return reinterpret_cast<const Term*>(this + 1); }

  /// Arguments are initialized to [] and filled by the caller.
  static CompoundCell* allocate(Symbol functor, uint32_t arity);
};

void destroy_cell(Cell* cell, Tag tag);

/// Number of live variable/compound cells in the calling process.
int64_t live_cells();

}  // namespace detail

inline void Term::retain() const {
  if (has_cell() && cell_->refs != detail::kImmortal) ++cell_->refs;
}

inline void Term::release() {
  if (has_cell() && cell_->refs != detail::kImmortal && --cell_->refs == 0) detail::destroy_cell(cell_, tag_);
}

inline Term::Term(const Term& other) noexcept : tag_(other.tag_), int_(other.int_) { retain(); }

inline Term::Term(Term&& other) noexcept : tag_(other.tag_), int_(other.int_) {
  other.tag_ = Tag::Atom;
  other.int_ = 0;
}

inline Term& Term::operator=(const Term& other) noexcept {
  if (this != &other) {
    other.retain();
    release();
    tag_ = other.tag_;
    int_ = other.int_;
  }
  return *this;
}

inline Term& Term::operator=(Term&& other) noexcept {
  if (this != &other) {
    Term old(std::move(*this));
    tag_ = other.tag_;
    int_ = other.int_;
    other.tag_ = Tag::Atom;
    other.int_ = 0;
  }
  return *this;
}

inline Term::~Term() { release(); }

inline Symbol Term::functor() const {
  if (tag_ == Tag::Compound) return static_cast<const detail::CompoundCell*>(cell_)->functor;
  return Symbol(sym_);
}

inline size_t Term::arity() const {
  return tag_ == Tag::Compound ? static_cast<const detail::CompoundCell*>(cell_)->arity : 0;
}

inline const Term& Term::arg(size_t i) const { return static_cast<const detail::CompoundCell*>(cell_)->args()[i]; }

inline std::span<const Term> Term::args() const {
  if (tag_ != Tag::Compound) return {};
  auto* c = static_cast<const detail::CompoundCell*>(cell_);
  return {c->args(), c->arity};
}

inline bool Term::is_bound() const { return static_cast<const detail::VarCell*>(cell_)->bound; }

inline uint64_t Term::serial() const { return static_cast<const detail::VarCell*>(cell_)->serial; }

inline const Term& Term::deref() const {
  const Term* t = this;
  while (t->tag_ == Tag::Var) {
    auto* v = static_cast<const detail::VarCell*>(t->cell_);
    if (!v->bound) break;
    t = &v->value;
  }
  return *t;
}

inline bool Term::same_cell(const Term& other) const {
  return tag_ == other.tag_ && has_cell() && cell_ == other.cell_;
}

inline bool Term::is_immortal() const { return has_cell() && cell_->refs == detail::kImmortal; }

inline bool Term::is_shared_ground() const {
  return tag_ == Tag::Compound && cell_->refs == detail::kImmortal &&
         static_cast<const detail::CompoundCell*>(cell_)->ground;
}

}  // namespace horn
