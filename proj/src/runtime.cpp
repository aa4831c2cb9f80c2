#include "horn/runtime.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "horn/bindings.hpp"
#include "horn/prelude.hpp"
#include "horn/writer.hpp"

namespace horn {

struct Runtime::Slot {
  Slot(std::shared_ptr<const Program> program, const Term& pattern, const Term& goal)
      : machine(std::move(program), pattern, goal) {}

  Machine machine;
  std::atomic<bool> busy{false};
  std::atomic<bool> stop_requested{false};
};

namespace {

// Clears the busy flag even if resume unwinds with a host exception.
struct BusyGuard {
  std::atomic<bool>& flag;
  ~BusyGuard() { flag.store(false); }
};

std::string event_text(const MachineEvent& ev) {
  switch (ev.kind) {
    case MachineEvent::Kind::AnswerReady:
      return "answer " + write_term(ev.value);
    case MachineEvent::Kind::Yielded:
      return "yield " + write_term(ev.value);
    case MachineEvent::Kind::Exhausted:
      return "exhausted";
    case MachineEvent::Kind::Error:
      return "error " + std::string(to_string(ev.error)) + ": " + ev.message;
  }
  return {};
}

int64_t int_arg(const Term& t, std::string_view what) {
  const Term& v = t.deref();
  if (v.is_var()) throw MachineError(ErrorKind::instantiation_error, std::string(what) + " must be bound", v);
  if (!v.is_int()) throw MachineError(ErrorKind::type_error, std::string(what) + " must be an integer", v);
  return v.int_value();
}

}  // namespace

Term handle_term(Symbol tag, int64_t id) { return Term::compound(tag, {Term::integer(id)}); }

int64_t handle_id(const Term& t, Symbol tag, std::string_view what) {
  const Term& v = t.deref();
  if (v.is_var()) throw MachineError(ErrorKind::instantiation_error, "unbound " + std::string(what), v);
  if (v.has_functor(tag, 1) && v.arg(0).deref().is_int()) return v.arg(0).deref().int_value();
  throw MachineError(ErrorKind::type_error, std::string(what) + " expected, found " + write_term(v), v);
}

Term HubRef::handle() const { return handle_term(atom::hub_tag, id); }

// ---------------------------------------------------------------------------
// Engine

Engine& Engine::operator=(Engine&& other) noexcept {
  if (this != &other) {
    stop();
    rt_ = std::exchange(other.rt_, nullptr);
    id_ = other.id_;
    serials_ = other.serials_;
    error_ = std::move(other.error_);
  }
  return *this;
}

Answer Engine::get() {
  if (!rt_) return Answer::no();
  std::string error;
  Answer a = rt_->get(id_, serials_, &error);
  if (!error.empty()) error_ = std::move(error);
  if (!a) return a;
  // detach from the database so the answer can outlive the runtime
  return Answer::the(TermCopier(serials_, false)(a.value()));
}

bool Engine::to_engine(const Term& data) { return rt_ && rt_->to_engine(id_, data); }

void Engine::stop() {
  if (!rt_) return;
  rt_->stop(id_);
  rt_ = nullptr;
}

Term Engine::handle() const { return handle_term(atom::engine_tag, id_); }

EngineId Engine::release() {
  rt_ = nullptr;
  return id_;
}

// ---------------------------------------------------------------------------
// Runtime

Runtime::Runtime(Options options) : program_(std::make_shared<Program>()), options_(std::move(options)) {
  install_core_builtins(*program_);
  install_builtins();
  if (options_.load_prelude)
    for (const PreludeFile& file : prelude_files()) consult(file.text, file.name);
}

Runtime::~Runtime() {
  {
    std::lock_guard lock(hubs_mutex_);
    for (auto& [id, hub] : hubs_) hub->close();
  }
  threads_.join_all();
  std::unordered_map<EngineId, std::shared_ptr<Slot>> engines;
  {
    std::lock_guard lock(engines_mutex_);
    engines.swap(engines_);
  }
}

void Runtime::consult(std::string_view text, std::string_view origin) {
  {
    std::lock_guard lock(engines_mutex_);
    if (program_->db.frozen()) throw std::logic_error("cannot consult " + std::string(origin) + ": engines already exist");
  }
  std::vector<SourceClause> clauses;
  {
    std::lock_guard lock(host_mutex_);
    clauses = parse_program(text, origin, host_serials_);
  }
  for (const SourceClause& c : clauses) {
    const Term& head = c.head.deref();
    if (program_->is_native(head.functor(), head.arity()))
      throw std::logic_error(c.origin + ":" + std::to_string(c.line) + ": cannot redefine builtin " +
                             quote_atom(head.functor()) + "/" + std::to_string(head.arity()));
  }
  program_->db.add_all(clauses);
}

void Runtime::consult_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  consult(text.str(), path);
}

ParsedTerm Runtime::parse(std::string_view text) {
  std::lock_guard lock(host_mutex_);
  return parse_term(text, host_serials_);
}

EngineId Runtime::create_engine(const Term& pattern, const Term& goal) {
  {
    std::lock_guard lock(engines_mutex_);
    program_->db.freeze();
  }
  auto slot = std::make_shared<Slot>(program_, pattern, goal);
  const EngineId id = next_engine_.fetch_add(1);
  std::lock_guard lock(engines_mutex_);
  engines_.emplace(id, std::move(slot));
  return id;
}

Engine Runtime::new_engine(const Term& pattern, const Term& goal) { return Engine(this, create_engine(pattern, goal)); }

Engine Runtime::new_engine(std::string_view pattern, std::string_view goal) {
  // parse both in one term so they share variables
  std::string text = "'$pair'((";
  text.append(pattern).append("),(").append(goal).append("))");
  ParsedTerm pair = parse(text);
  const Term& t = pair.term.deref();
  return new_engine(t.arg(0), t.arg(1));
}

std::shared_ptr<Runtime::Slot> Runtime::find(EngineId id) const {
  std::lock_guard lock(engines_mutex_);
  auto it = engines_.find(id);
  return it == engines_.end() ? nullptr : it->second;
}

std::shared_ptr<Runtime::Slot> Runtime::take(EngineId id) {
  std::lock_guard lock(engines_mutex_);
  auto it = engines_.find(id);
  if (it == engines_.end() || it->second->busy.load() || it->second->machine.status() == Status::Dead) return nullptr;
  auto slot = std::move(it->second);
  engines_.erase(it);
  return slot;
}

Answer Runtime::get(EngineId id, VarSerials& client, std::string* error) {
  auto slot = find(id);
  if (!slot) return Answer::no();
  if (slot->busy.exchange(true))
    throw MachineError(ErrorKind::permission_error, "engine " + std::to_string(id) + " is already running",
                       handle_term(atom::engine_tag, id));
  MachineEvent ev;
  {
    BusyGuard guard{slot->busy};
    ev = slot->machine.resume(client);
    if (slot->stop_requested.load()) slot->machine.kill();
  }
  if (options_.trace) diagnose("trace: engine " + std::to_string(id) + " " + event_text(ev));

  switch (ev.kind) {
    case MachineEvent::Kind::AnswerReady:
    case MachineEvent::Kind::Yielded:
      return Answer::the(std::move(ev.value));
    case MachineEvent::Kind::Exhausted:
      break;
    case MachineEvent::Kind::Error: {
      std::string line = "error in engine " + std::to_string(id) + ": " + std::string(to_string(ev.error)) + ": " +
                         ev.message;
      diagnose(line);
      if (error) *error = std::move(line);
      break;
    }
  }
  // a finished engine is stopped right away, releasing its stacks
  std::lock_guard lock(engines_mutex_);
  engines_.erase(id);
  return Answer::no();
}

bool Runtime::to_engine(EngineId id, const Term& data) {
  auto slot = find(id);
  return slot && slot->machine.deposit(data);
}

void Runtime::stop(EngineId id) {
  std::shared_ptr<Slot> slot;
  {
    std::lock_guard lock(engines_mutex_);
    auto it = engines_.find(id);
    if (it == engines_.end()) return;
    slot = std::move(it->second);
    engines_.erase(it);
  }
  if (!slot->busy.exchange(true)) {
    BusyGuard guard{slot->busy};
    slot->machine.kill();
  } else {
    // stopped from inside its own run; the running get finishes the kill
    slot->stop_requested.store(true);
  }
}

size_t Runtime::live_engines() const {
  std::lock_guard lock(engines_mutex_);
  return engines_.size();
}

std::optional<ThreadId> Runtime::run_bg(EngineId id) {
  auto slot = take(id);
  if (!slot) return std::nullopt;
  slot->busy.store(true);
  return threads_.spawn([this, slot = std::move(slot), id] {
    VarSerials serials;
    for (;;) {
      MachineEvent ev = slot->machine.resume(serials);
      if (options_.trace) diagnose("trace: engine " + std::to_string(id) + " " + event_text(ev));
      if (ev.kind == MachineEvent::Kind::Exhausted) break;
      if (ev.kind == MachineEvent::Kind::Error) {
        diagnose("error in engine " + std::to_string(id) + ": " + std::string(to_string(ev.error)) + ": " + ev.message);
        break;
      }
    }
    slot->machine.kill();
  });
}

std::optional<ThreadId> Runtime::run_bg(Engine&& engine) {
  if (engine.rt_ != this) return std::nullopt;
  return run_bg(engine.release());
}

HubRef Runtime::hub_ms(int64_t timeout_ms) {
  if (timeout_ms < 0) throw MachineError(ErrorKind::type_error, "hub timeout must be non-negative", Term::integer(timeout_ms));
  HubRef ref;
  ref.hub = std::make_shared<Hub>(std::chrono::milliseconds(timeout_ms));
  std::lock_guard lock(hubs_mutex_);
  ref.id = next_hub_++;
  hubs_.emplace(ref.id, ref.hub);
  return ref;
}

std::shared_ptr<Hub> Runtime::find_hub(int64_t id) const {
  std::lock_guard lock(hubs_mutex_);
  auto it = hubs_.find(id);
  return it == hubs_.end() ? nullptr : it->second;
}

void Runtime::close_hub(int64_t id) {
  std::shared_ptr<Hub> hub;
  {
    std::lock_guard lock(hubs_mutex_);
    auto it = hubs_.find(id);
    if (it == hubs_.end()) return;
    hub = std::move(it->second);
    hubs_.erase(it);
  }
  hub->close();
}

void Runtime::print(std::string_view text) const {
  std::lock_guard lock(output_mutex_);
  if (options_.output) {
    options_.output(text);
  } else {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
  }
}

void Runtime::diagnose(std::string_view line) const {
  std::lock_guard lock(output_mutex_);
  if (options_.diagnostics) {
    options_.diagnostics(line);
  } else {
    std::fprintf(stderr, "%.*s\n", static_cast<int>(line.size()), line.data());
  }
}

// ---------------------------------------------------------------------------
// Builtins for engines, threads and hubs

void Runtime::install_builtins() {
  Program& p = *program_;

  p.define("new_engine", 3, [this](Machine& m, std::span<const Term> a) {
    return m.unify(a[2], handle_term(atom::engine_tag, create_engine(a[0], a[1])));
  });
  p.define("get", 2, [this](Machine& m, std::span<const Term> a) {
    Answer answer = get(handle_id(a[0], atom::engine_tag, "engine"), m.serials());
    return m.unify(a[1], answer.to_term());
  });
  p.define("to_engine", 2, [this](Machine&, std::span<const Term> a) {
    return to_engine(handle_id(a[0], atom::engine_tag, "engine"), a[1]);
  });
  p.define("stop", 1, [this](Machine&, std::span<const Term> a) {
    const Term& h = a[0].deref();
    if (h.has_functor(atom::hub_tag, 1))
      close_hub(handle_id(h, atom::hub_tag, "hub"));
    else
      stop(handle_id(h, atom::engine_tag, "engine"));
    return true;
  });

  p.define("write", 1, [this](Machine&, std::span<const Term> a) {
    print(write_term(a[0], {.quoted = false}));
    return true;
  });
  p.define("nl", 0, [this](Machine&, std::span<const Term>) {
    print("\n");
    return true;
  });

  auto start_goal = [this](Machine& m, const Term& goal) {
    return run_bg(create_engine(Term::var(m.serials()), goal));
  };
  p.define("bg", 1, [start_goal](Machine& m, std::span<const Term> a) { return start_goal(m, a[0]).has_value(); });
  p.define("bg", 2, [start_goal](Machine& m, std::span<const Term> a) {
    auto t = start_goal(m, a[0]);
    return t && m.unify(a[1], handle_term(atom::thread_tag, *t));
  });
  p.define("run_bg", 2, [this](Machine& m, std::span<const Term> a) {
    auto t = run_bg(handle_id(a[0], atom::engine_tag, "engine"));
    return t && m.unify(a[1], handle_term(atom::thread_tag, *t));
  });
  p.define("current_thread", 1, [](Machine& m, std::span<const Term> a) {
    return m.unify(a[0], handle_term(atom::thread_tag, ThreadRegistry::current()));
  });
  p.define("join_thread", 1, [this](Machine&, std::span<const Term> a) {
    return threads_.join(handle_id(a[0], atom::thread_tag, "thread"));
  });
  p.define("sleep_ms", 1, [](Machine&, std::span<const Term> a) {
    const int64_t ms = int_arg(a[0], "sleep time");
    if (ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(ms));
    return true;
  });

  p.define("hub_ms", 2, [this](Machine& m, std::span<const Term> a) {
    return m.unify(a[1], hub_ms(int_arg(a[0], "hub timeout")).handle());
  });
  p.define("put", 2, [this](Machine&, std::span<const Term> a) {
    auto hub = find_hub(handle_id(a[0], atom::hub_tag, "hub"));
    return hub && hub->put(a[1]);
  });
  p.define("collect", 2, [this](Machine& m, std::span<const Term> a) {
    auto hub = find_hub(handle_id(a[0], atom::hub_tag, "hub"));
    if (!hub) return false;
    auto data = hub->collect();
    return data && m.unify(a[1], m.import(*data));
  });
}

}  // namespace horn
