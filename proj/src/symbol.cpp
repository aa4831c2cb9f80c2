#include "horn/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>

namespace horn {
namespace {

class SymbolTable {
 public:
  SymbolTable() {
#define HORN_ATOM_SEED(name, text) add(text);
    HORN_WELL_KNOWN_ATOMS(HORN_ATOM_SEED)
#undef HORN_ATOM_SEED
  }

  uint32_t intern(std::string_view text) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = ids_.find(text); it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    if (auto it = ids_.find(text); it != ids_.end()) return it->second;
    return add(text);
  }

  std::string_view text(uint32_t id) {
    std::shared_lock lock(mutex_);
    return names_.at(id);
  }

 private:
  uint32_t add(std::string_view text) {
    auto id = static_cast<uint32_t>(names_.size());
    // deque never relocates elements, so views into names_ stay valid
    const std::string& stored = names_.emplace_back(text);
    ids_.emplace(std::string_view(stored), id);
    return id;
  }

  std::shared_mutex mutex_;
  std::deque<std::string> names_;
  std::unordered_map<std::string_view, uint32_t> ids_;
};

SymbolTable& table() {
  static SymbolTable instance;
  return instance;
}

}  // namespace

Symbol Symbol::intern(std::string_view text) { return Symbol(table().intern(text)); }

std::string_view Symbol::text() const { return table().text(id_); }

}  // namespace horn
