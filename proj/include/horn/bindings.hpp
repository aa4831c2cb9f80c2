#pragma once

#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "horn/term.hpp"

namespace horn {

/// The trail: variables bound since some mark, so they can be reset on
/// backtracking. Variables whose serial is at or above the recording
/// threshold are newer than every live choice point and are bound without
/// being recorded.
class Bindings {
 public:
  size_t mark() const { return entries_.size(); }
  size_t size() const { return entries_.size(); }

  /// Resets every variable recorded after `mark`, newest first.
  void undo(size_t mark);
  void clear() { undo(0); }

  /// `var` must be an unbound variable.
  void bind(const Term& var, const Term& value);

  /// Drops, without undoing, entries past `mark` whose serial is at or above
  /// `keep_below`. Used when choice points are cut away.
  void forget_above(size_t mark, uint64_t keep_below);

  void record_below(uint64_t serial) { record_below_ = serial; }
  void record_all() { record_below_ = std::numeric_limits<uint64_t>::max(); }

 private:
  std::vector<Term> entries_;
  uint64_t record_below_ = std::numeric_limits<uint64_t>::max();
};

/// Unification without occurs check. On failure every recorded binding made
/// by this call is undone.
bool unify(const Term& a, const Term& b, Bindings& bindings);

/// Structural identity (`==`): variables match only themselves.
bool identical(const Term& a, const Term& b);

/// Copies terms into fresh variables. One copier preserves variable sharing
/// across all the terms it copies.
class TermCopier {
 public:
  /// With `share_immortal` false the copy owns every cell, so it may outlive
  /// the database it was read from.
  explicit TermCopier(VarSerials& serials, bool share_immortal = true)
      : serials_(serials), share_immortal_(share_immortal) {}
  Term operator()(const Term& t);

 private:
  void copy_into(const Term& src, Term* dest);

  VarSerials& serials_;
  bool share_immortal_;
  std::unordered_map<const void*, Term> vars_;
};

inline Term copy_term(const Term& t, VarSerials& serials) { return TermCopier(serials)(t); }

/// True if the term reaches itself through bindings.
bool is_cyclic(const Term& t);

}  // namespace horn
