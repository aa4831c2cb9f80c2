#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "horn/reader.hpp"
#include "horn/term.hpp"

namespace horn {

using PredicateKey = uint64_t;

inline PredicateKey predicate_key(Symbol name, size_t arity) {
  return (static_cast<uint64_t>(name.id()) << 32) | static_cast<uint32_t>(arity);
}

/// A stored clause. Terms are immortal templates whose variables are frame
/// slots; `rename` instantiates them with fresh variables.
struct Clause {
  Term head;
  std::vector<Term> body;  ///< conjunction flattened left to right
  uint32_t frame_size = 0;
  std::string origin;
  int line = 0;
};

struct Predicate {
  Symbol name;
  size_t arity = 0;
  std::vector<Clause> clauses;
};

/// Owns immortal cells, which skip reference counting and can therefore be
/// read by several threads at once.
class ImmortalArena {
 public:
  ImmortalArena() = default;
  ImmortalArena(const ImmortalArena&) = delete;
  ImmortalArena& operator=(const ImmortalArena&) = delete;
  ~ImmortalArena();

  /// Copies `t`, numbering variables through `slots` (keyed by cell).
  Term freeze(const Term& t, std::unordered_map<const void*, uint32_t>& slots);

 private:
  std::vector<std::pair<detail::Cell*, Tag>> cells_;
};

/// Clause store indexed by name/arity. Clause order is source order. Once
/// frozen it is never modified, so engines on any thread may share it.
class Database {
 public:
  void add(const SourceClause& clause);
  void add_all(const std::vector<SourceClause>& clauses) {
    for (const auto& c : clauses) add(c);
  }

  const Predicate* lookup(Symbol name, size_t arity) const;
  const Predicate* lookup(PredicateKey key) const;
  bool defines(Symbol name, size_t arity) const { return lookup(name, arity) != nullptr; }
  const std::unordered_map<PredicateKey, Predicate>& predicates() const { return preds_; }

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

 private:
  ImmortalArena arena_;  // outlives the clauses that point into it
  std::unordered_map<PredicateKey, Predicate> preds_;
  bool frozen_ = false;
};

/// Instantiates clause templates for one resolution step. Variables are
/// created on first use, so unused slots cost nothing.
class Renamer {
 public:
  Renamer(const Clause& clause, VarSerials& serials) : slots_(clause.frame_size), serials_(serials) {}
  Term operator()(const Term& tmpl);

 private:
  void rename_into(const Term& src, Term* dest);

  std::vector<Term> slots_;
  VarSerials& serials_;
};

}  // namespace horn
