#include "horn/error.hpp"

namespace horn {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::type_error:
      return "type_error";
    case ErrorKind::instantiation_error:
      return "instantiation_error";
    case ErrorKind::arith_error:
      return "arith_error";
    case ErrorKind::mailbox_empty:
      return "mailbox_empty";
    case ErrorKind::unknown_predicate:
      return "unknown_predicate";
    case ErrorKind::permission_error:
      return "permission_error";
  }
  return "error";
}

MachineError::MachineError(ErrorKind kind, std::string message, Term culprit)
    : std::runtime_error(std::move(message)), kind_(kind), culprit_(std::move(culprit)) {}

}  // namespace horn
