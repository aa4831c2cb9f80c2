#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "horn/hub.hpp"
#include "horn/machine.hpp"
#include "horn/reader.hpp"
#include "horn/term.hpp"

namespace horn {

/// Result of get: `the(Value)` or `no`.
class Answer {
 public:
  static Answer no() { return Answer(); }
  static Answer the(Term value) {
    Answer a;
    a.value_ = std::move(value);
    return a;
  }

  bool is_no() const { return !value_; }
  explicit operator bool() const { return value_.has_value(); }
  const Term& value() const { return *value_; }
  /// The protocol term itself.
  Term to_term() const { return value_ ? Term::compound(atom::the, {*value_}) : Term::atom(atom::no); }

 private:
  std::optional<Term> value_;
};

using EngineId = int64_t;
class Runtime;

/// Host-side owner of one engine. Dropping the handle stops the engine.
/// Calls on a released or stopped handle are reported failures.
class Engine {
 public:
  Engine() = default;
  Engine(Engine&& other) noexcept { *this = std::move(other); }
  Engine& operator=(Engine&& other) noexcept;
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;
  ~Engine() { stop(); }

  /// Answers are standalone copies that may outlive the runtime.
  Answer get();
  /// False once the engine is dead.
  bool to_engine(const Term& data);
  void stop();

  EngineId id() const { return id_; }
  bool valid() const { return rt_ != nullptr; }
  /// `'$engine'(Id)`, usable in goals passed to the same runtime.
  Term handle() const;
  /// Set when the engine died of a machine error.
  const std::optional<std::string>& error() const { return error_; }

  /// Gives up ownership without stopping; the engine stays reachable
  /// through its handle term.
  EngineId release();

 private:
  friend class Runtime;
  Engine(Runtime* rt, EngineId id) : rt_(rt), id_(id) {}

  Runtime* rt_ = nullptr;
  EngineId id_ = 0;
  VarSerials serials_;
  std::optional<std::string> error_;
};

/// A hub registered with a runtime, so object code can reach it as `'$hub'(Id)`.
struct HubRef {
  int64_t id = 0;
  std::shared_ptr<Hub> hub;
  Term handle() const;
};

/// Loaded program, engine table, hubs and background threads. Every engine
/// created through a runtime shares its clause database, which is frozen
/// when the first engine is created.
class Runtime {
 public:
  using Sink = std::function<void(std::string_view)>;

  struct Options {
    bool load_prelude = true;
    /// One line per machine error (no trailing newline). Defaults to stderr.
    Sink diagnostics;
    /// Text from write/1 and nl/0. Defaults to stdout.
    Sink output;
    /// Report every resume event on the diagnostics sink.
    bool trace = false;
  };

  Runtime() : Runtime(Options{}) {}
  explicit Runtime(Options options);
  ~Runtime();
  Runtime(const Runtime&) = delete;
  Runtime& operator=(const Runtime&) = delete;

  /// Adds clauses. Throws ParseError on bad syntax, std::logic_error once
  /// engines exist or when a clause would redefine a builtin.
  void consult(std::string_view text, std::string_view origin = "user");
  /// Throws std::runtime_error if the file cannot be read.
  void consult_file(const std::string& path);

  /// Parses with variables numbered by the runtime's host serials.
  ParsedTerm parse(std::string_view text);

  /// Throws MachineError(type_error) unless the goal is callable.
  Engine new_engine(const Term& pattern, const Term& goal);
  Engine new_engine(std::string_view pattern, std::string_view goal);

  /// Starts a thread that drives the engine to exhaustion. Nullopt if the
  /// engine is dead or not owned by this runtime.
  std::optional<ThreadId> run_bg(Engine&& engine);
  /// Returns false for unknown ids; throws for the calling thread itself.
  bool join_thread(ThreadId id) { return threads_.join(id); }

  /// `timeout` of zero means wait indefinitely.
  HubRef hub_ms(int64_t timeout_ms);

  size_t live_engines() const;
  const Program& program() const { return *program_; }

  // Operations by id, shared by host handles and builtins.
  EngineId create_engine(const Term& pattern, const Term& goal);
  Answer get(EngineId id, VarSerials& client, std::string* error = nullptr);
  bool to_engine(EngineId id, const Term& data);
  void stop(EngineId id);
  std::optional<ThreadId> run_bg(EngineId id);
  std::shared_ptr<Hub> find_hub(int64_t id) const;
  void close_hub(int64_t id);

  void print(std::string_view text) const;
  void diagnose(std::string_view line) const;

 private:
  struct Slot;

  void install_builtins();
  std::shared_ptr<Slot> find(EngineId id) const;
  std::shared_ptr<Slot> take(EngineId id);

  std::shared_ptr<Program> program_;
  Options options_;

  mutable std::mutex output_mutex_;

  mutable std::mutex engines_mutex_;
  std::unordered_map<EngineId, std::shared_ptr<Slot>> engines_;
  std::atomic<EngineId> next_engine_{1};

  mutable std::mutex hubs_mutex_;
  std::unordered_map<int64_t, std::shared_ptr<Hub>> hubs_;
  int64_t next_hub_ = 1;

  std::mutex host_mutex_;
  VarSerials host_serials_;

  // declared last: threads are joined before anything above is torn down
  ThreadRegistry threads_;
};

/// Handle terms: `'$engine'(Id)`, `'$hub'(Id)`, `'$thread'(Id)`.
Term handle_term(Symbol tag, int64_t id);
/// Id carried by a handle with the given tag. Throws MachineError
/// (instantiation_error or type_error) for anything else.
int64_t handle_id(const Term& t, Symbol tag, std::string_view what);

}  // namespace horn
