#pragma once

#include <string>

#include "horn/term.hpp"

namespace horn {

struct WriteOptions {
  /// Quote atoms where needed so the output reads back as the same term.
  bool quoted = true;
  /// Nesting depth at which cyclic terms are cut off with `...`. Acyclic
  /// terms are always written in full.
  int cyclic_depth = 64;
};

/// Operators print infix; unbound variables print as `_G<serial>`.
std::string write_term(const Term& t, const WriteOptions& options = {});

/// Atom text as it must appear in source to read back as the same atom.
std::string quote_atom(Symbol s);

}  // namespace horn
