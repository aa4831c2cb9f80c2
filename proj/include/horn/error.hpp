#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "horn/term.hpp"

namespace horn {

enum class ErrorKind {
  type_error,
  instantiation_error,
  arith_error,
  mailbox_empty,
  unknown_predicate,
  permission_error,
};

std::string_view to_string(ErrorKind kind);

/// Raised by builtins while a machine runs. The machine catches it, dies,
/// and reports it as an event; it never reaches an engine's client.
class MachineError : public std::runtime_error {
 public:
  MachineError(ErrorKind kind, std::string message, Term culprit = Term());

  ErrorKind kind() const { return kind_; }
  const Term& culprit() const { return culprit_; }

 private:
  ErrorKind kind_;
  Term culprit_;
};

}  // namespace horn
