#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "horn/bindings.hpp"
#include "horn/database.hpp"
#include "horn/error.hpp"
#include "horn/term.hpp"

namespace horn {

class Machine;

/// A deterministic native predicate: succeeds, fails, or throws MachineError.
using Builtin = std::function<bool(Machine&, std::span<const Term>)>;

/// Code shared by a family of engines. Immutable once the first machine boots.
struct Program {
  Database db;
  std::unordered_map<PredicateKey, Builtin> builtins;

  void define(std::string_view name, size_t arity, Builtin fn);
  const Builtin* builtin(PredicateKey key) const;
  /// Builtins plus the control constructs the machine handles itself.
  bool is_native(Symbol name, size_t arity) const;
};

/// Installs the type checks, comparisons, arithmetic and unification builtins.
void install_core_builtins(Program& program);

struct MachineEvent {
  enum class Kind { AnswerReady, Yielded, Exhausted, Error };
  /// An injected goal that fails simply exhausts the machine.
  static constexpr Kind Failed = Kind::Exhausted;

  Kind kind = Kind::Exhausted;
  Term value;  ///< answer or yielded term, copied into the client's variables; error culprit otherwise
  ErrorKind error = ErrorKind::type_error;
  std::string message;
};

enum class Status { Ready, Suspended, Dead };

/// A goal awaiting execution. The goal stack is a persistent linked list:
/// choice points keep a pointer to the continuation they must restore, and a
/// clause's frame disappears as soon as nothing refers to it.
struct GoalNode {
  Term goal;
  size_t cut_barrier = 0;
  std::shared_ptr<GoalNode> next;

  GoalNode(Term g, size_t barrier, std::shared_ptr<GoalNode> rest)
      : goal(std::move(g)), cut_barrier(barrier), next(std::move(rest)) {}
  ~GoalNode();
};
using GoalList = std::shared_ptr<GoalNode>;

/// An LD-resolution interpreter whose whole state is explicit data, so a run
/// can stop at an answer or a return/1 and later continue where it left off.
class Machine {
 public:
  /// Copies pattern and goal together (shared variables stay shared). Throws
  /// MachineError(type_error) unless the goal is callable.
  Machine(std::shared_ptr<const Program> program, const Term& pattern, const Term& goal);
  Machine(const Machine&) = delete;
  Machine& operator=(const Machine&) = delete;

  /// Runs until the next answer, return/1, exhaustion or error. Terms in the
  /// event are copies made with the client's serials.
  MachineEvent resume(VarSerials& client);

  /// Queues a copy of `t` for from_engine/1. False once the machine is dead.
  bool deposit(const Term& t);

  /// Idempotent; releases all stacks.
  void kill();

  Status status() const { return status_; }
  uint64_t steps() const { return steps_; }
  size_t choicepoints() const { return cps_.size(); }
  size_t trail_size() const { return bindings_.size(); }
  size_t mailbox_size() const { return mailbox_.size(); }

  // Services for builtins.
  bool unify(const Term& a, const Term& b);
  /// Unifiability test that leaves no bindings behind.
  bool unifiable(const Term& a, const Term& b);
  /// Copies a foreign term into this machine's variables.
  Term import(const Term& t);
  std::optional<Term> take_mail();
  VarSerials& serials() { return serials_; }
  const Program& program() const { return *program_; }

 private:
  struct ChoicePoint {
    enum class Kind : uint8_t { Clauses, Between };
    Kind kind = Kind::Clauses;
    Term goal;
    GoalList cont;
    const Predicate* pred = nullptr;
    size_t next = 0;
    int64_t low = 0;
    int64_t high = 0;
    size_t trail_mark = 0;
    uint64_t var_mark = 0;
  };

  enum class Step { Continue, Fail, Yield };

  Step step(const Term& goal, size_t barrier, VarSerials& client, MachineEvent& event);
  Step call_predicate(const Term& goal, const Predicate& pred);
  Step between(std::span<const Term> args);
  bool backtrack();
  bool try_clause(const Clause& clause, const Term& goal, size_t barrier, const GoalList& cont);
  size_t next_candidate(const Predicate& pred, const Term& goal, size_t from) const;
  void push_choicepoint(ChoicePoint cp);
  void pop_choicepoint();
  void cut_to(size_t height);

  std::shared_ptr<const Program> program_;
  VarSerials serials_;
  Term pattern_;
  GoalList goals_;
  std::vector<ChoicePoint> cps_;
  Bindings bindings_;
  std::deque<Term> mailbox_;
  Status status_ = Status::Ready;
  bool backtrack_pending_ = false;
  uint64_t steps_ = 0;
};

}  // namespace horn
