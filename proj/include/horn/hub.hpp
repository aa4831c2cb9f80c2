#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>

#include "horn/term.hpp"

namespace horn {

/// Producer/consumer exchanger. Any number of threads may put and collect;
/// a consumer gives up after the timeout (zero waits indefinitely). Terms are
/// deep-copied on the way in, so a hub is the only path by which data
/// crosses threads.
class Hub {
 public:
  explicit Hub(std::chrono::milliseconds timeout) : timeout_(timeout) {}

  /// False once the hub is closed.
  bool put(const Term& data);

  /// Oldest pending term, or nullopt on timeout or when the hub is closed.
  std::optional<Term> collect();

  /// Wakes every waiting consumer; later operations fail.
  void close();

  bool closed() const;
  size_t size() const;
  std::chrono::milliseconds timeout() const { return timeout_; }

 private:
  const std::chrono::milliseconds timeout_;
  mutable std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<Term> queue_;
  bool closed_ = false;
};

using ThreadId = int64_t;

/// Native threads started by bg/run_bg. Joining is idempotent and may be done
/// from any thread except the one being joined.
class ThreadRegistry {
 public:
  ThreadRegistry() = default;
  ThreadRegistry(const ThreadRegistry&) = delete;
  ThreadRegistry& operator=(const ThreadRegistry&) = delete;
  ~ThreadRegistry() { join_all(); }

  ThreadId spawn(std::function<void()> body);

  /// Waits for the thread to finish. False for an unknown id. Throws
  /// MachineError(permission_error) if `id` is the calling thread.
  bool join(ThreadId id);
  void join_all();

  /// Threads not started here (the main thread included) report 0.
  static ThreadId current();

 private:
  struct Record {
    std::thread thread;
    std::mutex mutex;
    std::condition_variable done;
    bool finished = false;
    bool joined = false;
  };

  std::mutex mutex_;
  std::unordered_map<ThreadId, std::shared_ptr<Record>> records_;
  ThreadId next_id_ = 1;
};

}  // namespace horn
