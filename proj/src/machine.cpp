#include "horn/machine.hpp"

#include <string>

#include "horn/writer.hpp"

namespace horn {
namespace {

constexpr size_t kNone = static_cast<size_t>(-1);

std::string indicator(Symbol name, size_t arity) { return quote_atom(name) + "/" + std::to_string(arity); }

// First-argument prefilter: skips clauses whose head cannot match before any
// renaming happens, so deterministic calls leave no choice point behind.
bool may_match(const Term& head_arg, const Term& goal_arg) {
  if (head_arg.is_var() || goal_arg.is_var()) return true;
  if (head_arg.tag() != goal_arg.tag()) return false;
  switch (goal_arg.tag()) {
    case Tag::Atom:
      return head_arg.symbol() == goal_arg.symbol();
    case Tag::Int:
      return head_arg.int_value() == goal_arg.int_value();
    case Tag::Compound:
      return head_arg.functor() == goal_arg.functor() && head_arg.arity() == goal_arg.arity();
    case Tag::Var:
      return true;
  }
  return true;
}

}  // namespace

GoalNode::~GoalNode() {
  // unlink iteratively; a long continuation would otherwise recurse per node
  GoalList n = std::move(next);
  while (n && n.use_count() == 1) n = std::move(n->next);
}

void Program::define(std::string_view name, size_t arity, Builtin fn) {
  builtins[predicate_key(Symbol::intern(name), arity)] = std::move(fn);
}

const Builtin* Program::builtin(PredicateKey key) const {
  auto it = builtins.find(key);
  return it == builtins.end() ? nullptr : &it->second;
}

bool Program::is_native(Symbol name, size_t arity) const {
  if (builtin(predicate_key(name, arity))) return true;
  switch (name.id()) {
    case atom::true__index:
    case atom::fail_index:
    case atom::false__index:
    case atom::cut_index:
      return arity == 0;
    case atom::comma_index:
      return arity == 2;
    case atom::call_index:
      return arity >= 1;
    case atom::return__index:
    case atom::from_engine_index:
      return arity == 1;
    case atom::between_index:
      return arity == 3;
    default:
      return false;
  }
}

Machine::Machine(std::shared_ptr<const Program> program, const Term& pattern, const Term& goal)
    : program_(std::move(program)) {
  const Term& g = goal.deref();
  if (!g.is_callable()) throw MachineError(ErrorKind::type_error, "callable goal expected, found " + write_term(g), g);
  TermCopier copy(serials_);
  pattern_ = copy(pattern);
  goals_ = std::make_shared<GoalNode>(copy(g), 0, nullptr);
}

MachineEvent Machine::resume(VarSerials& client) {
  MachineEvent event;
  if (status_ == Status::Dead) return event;
  status_ = Status::Suspended;
  try {
    if (backtrack_pending_) {
      backtrack_pending_ = false;
      if (!backtrack()) {
        kill();
        return event;
      }
    }
    for (;;) {
      if (!goals_) {
        backtrack_pending_ = true;
        event.kind = MachineEvent::Kind::AnswerReady;
        event.value = TermCopier(client)(pattern_);
        return event;
      }
      GoalList node = goals_;
      goals_ = node->next;
      ++steps_;
      switch (step(node->goal, node->cut_barrier, client, event)) {
        case Step::Continue:
          break;
        case Step::Yield:
          return event;
        case Step::Fail:
          if (!backtrack()) {
            kill();
            return event;
          }
          break;
      }
    }
  } catch (const MachineError& e) {
    event.kind = MachineEvent::Kind::Error;
    event.error = e.kind();
    event.message = e.what();
    event.value = TermCopier(client)(e.culprit());
    kill();
    return event;
  }
}

Machine::Step Machine::step(const Term& goal_term, size_t barrier, VarSerials& client, MachineEvent& event) {
  const Term& goal = goal_term.deref();
  if (goal.is_var()) throw MachineError(ErrorKind::instantiation_error, "unbound goal", goal);
  if (goal.is_int()) throw MachineError(ErrorKind::type_error, "callable goal expected, found " + write_term(goal), goal);

  const Symbol name = goal.functor();
  const size_t arity = goal.arity();
  auto args = goal.args();
  switch (name.id()) {
    case atom::true__index:
      if (arity == 0) return Step::Continue;
      break;
    case atom::fail_index:
    case atom::false__index:
      if (arity == 0) return Step::Fail;
      break;
    case atom::comma_index:
      if (arity == 2) {
        goals_ = std::make_shared<GoalNode>(args[0], barrier, std::make_shared<GoalNode>(args[1], barrier, goals_));
        return Step::Continue;
      }
      break;
    case atom::cut_index:
      if (arity == 0) {
        cut_to(barrier);
        return Step::Continue;
      }
      break;
    case atom::call_index: {
      if (arity == 0) break;
      const Term& target = args[0].deref();
      Term callee;
      if (arity == 1) {
        callee = target;
      } else if (target.is_callable()) {
        std::vector<Term> full(target.args().begin(), target.args().end());
        full.insert(full.end(), args.begin() + 1, args.end());
        callee = Term::compound(target.functor(), full);
      } else if (target.is_var()) {
        throw MachineError(ErrorKind::instantiation_error, "unbound closure in call/" + std::to_string(arity), target);
      } else {
        throw MachineError(ErrorKind::type_error, "callable expected, found " + write_term(target), target);
      }
      // cut inside a called goal is local to it
      goals_ = std::make_shared<GoalNode>(std::move(callee), cps_.size(), goals_);
      return Step::Continue;
    }
    case atom::return__index:
      if (arity == 1) {
        event.kind = MachineEvent::Kind::Yielded;
        event.value = TermCopier(client)(args[0]);
        return Step::Yield;
      }
      break;
    case atom::between_index:
      if (arity == 3) return between(args);
      break;
    case atom::from_engine_index:
      if (arity == 1) {
        auto mail = take_mail();
        if (!mail) throw MachineError(ErrorKind::mailbox_empty, "from_engine/1 with an empty mailbox");
        return unify(args[0], *mail) ? Step::Continue : Step::Fail;
      }
      break;
    default:
      break;
  }

  const PredicateKey key = predicate_key(name, arity);
  if (const Builtin* fn = program_->builtin(key)) return (*fn)(*this, args) ? Step::Continue : Step::Fail;
  if (const Predicate* pred = program_->db.lookup(key)) return call_predicate(goal, *pred);
  throw MachineError(ErrorKind::unknown_predicate, "unknown procedure " + indicator(name, arity),
                     Term::compound(atom::divide, {Term::atom(name), Term::integer(static_cast<int64_t>(arity))}));
}

Machine::Step Machine::call_predicate(const Term& goal, const Predicate& pred) {
  const size_t first = next_candidate(pred, goal, 0);
  if (first == kNone) return Step::Fail;
  const size_t second = next_candidate(pred, goal, first + 1);
  const size_t barrier = cps_.size();
  GoalList cont = goals_;
  if (second != kNone) {
    ChoicePoint cp;
    cp.goal = goal;
    cp.cont = cont;
    cp.pred = &pred;
    cp.next = second;
    push_choicepoint(std::move(cp));
  }
  return try_clause(pred.clauses[first], goal, barrier, cont) ? Step::Continue : Step::Fail;
}

Machine::Step Machine::between(std::span<const Term> args) {
  const Term& lo = args[0].deref();
  const Term& hi = args[1].deref();
  const Term& x = args[2].deref();
  for (const Term* bound : {&lo, &hi}) {
    if (bound->is_var()) throw MachineError(ErrorKind::instantiation_error, "between/3 bounds must be bound", *bound);
    if (!bound->is_int()) throw MachineError(ErrorKind::type_error, "between/3 bounds must be integers", *bound);
  }
  const int64_t low = lo.int_value();
  const int64_t high = hi.int_value();
  if (x.is_int()) return low <= x.int_value() && x.int_value() <= high ? Step::Continue : Step::Fail;
  if (!x.is_var()) throw MachineError(ErrorKind::type_error, "between/3 expects an integer", x);
  if (low > high) return Step::Fail;
  if (low < high) {
    ChoicePoint cp;
    cp.kind = ChoicePoint::Kind::Between;
    cp.goal = x;
    cp.cont = goals_;
    cp.low = low + 1;
    cp.high = high;
    push_choicepoint(std::move(cp));
  }
  return unify(x, Term::integer(low)) ? Step::Continue : Step::Fail;
}

bool Machine::backtrack() {
  while (!cps_.empty()) {
    ChoicePoint& cp = cps_.back();
    bindings_.undo(cp.trail_mark);
    if (cp.kind == ChoicePoint::Kind::Between) {
      const int64_t value = cp.low;
      Term target = cp.goal;
      goals_ = cp.cont;
      if (cp.low == cp.high)
        pop_choicepoint();
      else
        ++cp.low;
      unify(target, Term::integer(value));
      return true;
    }
    const size_t barrier = cps_.size() - 1;
    const Predicate& pred = *cp.pred;
    const size_t index = cp.next;
    Term goal = cp.goal;
    GoalList cont = cp.cont;
    const size_t following = next_candidate(pred, goal, index + 1);
    if (following == kNone)
      pop_choicepoint();
    else
      cp.next = following;
    if (try_clause(pred.clauses[index], goal, barrier, cont)) return true;
  }
  return false;
}

bool Machine::try_clause(const Clause& clause, const Term& goal, size_t barrier, const GoalList& cont) {
  Renamer rename(clause, serials_);
  if (!unify(rename(clause.head), goal)) return false;
  GoalList goals = cont;
  for (size_t i = clause.body.size(); i-- > 0;)
    goals = std::make_shared<GoalNode>(rename(clause.body[i]), barrier, std::move(goals));
  goals_ = std::move(goals);
  return true;
}

size_t Machine::next_candidate(const Predicate& pred, const Term& goal, size_t from) const {
  if (goal.arity() == 0) return from < pred.clauses.size() ? from : kNone;
  const Term& first_arg = goal.arg(0).deref();
  for (size_t i = from; i < pred.clauses.size(); ++i)
    if (may_match(pred.clauses[i].head.arg(0), first_arg)) return i;
  return kNone;
}

void Machine::push_choicepoint(ChoicePoint cp) {
  cp.trail_mark = bindings_.mark();
  cp.var_mark = serials_.peek();
  cps_.push_back(std::move(cp));
  bindings_.record_below(cps_.back().var_mark);
}

// Callers have already undone the trail down to the popped entry's mark.
void Machine::pop_choicepoint() {
  cps_.pop_back();
  if (cps_.empty()) {
    bindings_.record_below(0);
    bindings_.forget_above(0, 0);
  } else {
    bindings_.record_below(cps_.back().var_mark);
  }
}

void Machine::cut_to(size_t height) {
  if (cps_.size() <= height) return;
  const size_t scan_from = cps_[height].trail_mark;
  cps_.erase(cps_.begin() + static_cast<std::ptrdiff_t>(height), cps_.end());
  if (cps_.empty()) {
    bindings_.record_below(0);
    bindings_.forget_above(0, 0);
    return;
  }
  // entries for variables newer than the surviving choice point are useless
  const uint64_t keep_below = cps_.back().var_mark;
  bindings_.record_below(keep_below);
  bindings_.forget_above(scan_from, keep_below);
}

bool Machine::unify(const Term& a, const Term& b) { return horn::unify(a, b, bindings_); }

bool Machine::unifiable(const Term& a, const Term& b) {
  const size_t mark = bindings_.mark();
  bindings_.record_all();
  const bool ok = horn::unify(a, b, bindings_);
  bindings_.undo(mark);
  bindings_.record_below(cps_.empty() ? 0 : cps_.back().var_mark);
  return ok;
}

Term Machine::import(const Term& t) { return TermCopier(serials_)(t); }

std::optional<Term> Machine::take_mail() {
  if (mailbox_.empty()) return std::nullopt;
  Term t = std::move(mailbox_.front());
  mailbox_.pop_front();
  return t;
}

bool Machine::deposit(const Term& t) {
  if (status_ == Status::Dead) return false;
  mailbox_.push_back(import(t));
  return true;
}

void Machine::kill() {
  status_ = Status::Dead;
  backtrack_pending_ = false;
  goals_.reset();
  cps_.clear();
  bindings_.clear();
  bindings_.record_below(0);
  mailbox_.clear();
  pattern_ = Term();
}

}  // namespace horn
