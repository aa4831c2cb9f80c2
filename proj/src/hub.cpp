#include "horn/hub.hpp"

#include <vector>

#include "horn/bindings.hpp"
#include "horn/error.hpp"

namespace horn {

bool Hub::put(const Term& data) {
  VarSerials serials;
  Term copy = TermCopier(serials, false)(data);
  {
    std::lock_guard lock(mutex_);
    if (closed_) return false;
    queue_.push_back(std::move(copy));
  }
  ready_.notify_one();
  return true;
}

std::optional<Term> Hub::collect() {
  std::unique_lock lock(mutex_);
  auto available = [this] { return closed_ || !queue_.empty(); };
  if (timeout_.count() == 0) {
    ready_.wait(lock, available);
  } else if (!ready_.wait_until(lock, std::chrono::steady_clock::now() + timeout_, available)) {
    return std::nullopt;
  }
  if (closed_) return std::nullopt;
  Term t = std::move(queue_.front());
  queue_.pop_front();
  return t;
}

void Hub::close() {
  std::deque<Term> dropped;
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
    dropped.swap(queue_);
  }
  ready_.notify_all();
}

bool Hub::closed() const {
  std::lock_guard lock(mutex_);
  return closed_;
}

size_t Hub::size() const {
  std::lock_guard lock(mutex_);
  return queue_.size();
}

namespace {
thread_local ThreadId t_current_thread = 0;
}

ThreadId ThreadRegistry::current() { return t_current_thread; }

ThreadId ThreadRegistry::spawn(std::function<void()> body) {
  auto record = std::make_shared<Record>();
  ThreadId id;
  {
    std::lock_guard lock(mutex_);
    id = next_id_++;
    records_.emplace(id, record);
  }
  std::lock_guard lock(record->mutex);
  record->thread = std::thread([record, id, body = std::move(body)] {
    t_current_thread = id;
    body();
    std::lock_guard done_lock(record->mutex);
    record->finished = true;
    record->done.notify_all();
  });
  return id;
}

bool ThreadRegistry::join(ThreadId id) {
  if (id == current() && id != 0) throw MachineError(ErrorKind::permission_error, "a thread cannot join itself");
  std::shared_ptr<Record> record;
  {
    std::lock_guard lock(mutex_);
    auto it = records_.find(id);
    if (it == records_.end()) return false;
    record = it->second;
  }
  std::unique_lock lock(record->mutex);
  record->done.wait(lock, [&] { return record->finished; });
  if (!record->joined) {
    record->joined = true;
    record->thread.join();
  }
  return true;
}

void ThreadRegistry::join_all() {
  std::vector<ThreadId> ids;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [id, record] : records_) ids.push_back(id);
  }
  for (ThreadId id : ids) join(id);
}

}  // namespace horn
