#pragma once

// Lazily filled lookup table that is safe to share between threads. Copies
// start from a snapshot of the source table.

#include <map>
#include <mutex>

namespace equicohom {

template <class Key, class Value>
class Memo {
 public:
  Memo() = default;
  Memo(const Memo& other) {
    std::lock_guard lock(other.mutex_);
    table_ = other.table_;
  }
  Memo& operator=(const Memo& other) {
    if (this != &other) {
      std::scoped_lock lock(mutex_, other.mutex_);
      table_ = other.table_;
    }
    return *this;
  }

  /// The stored value, built on first use. References stay valid for the table's lifetime.
  template <class Build>
  const Value& get(const Key& key, Build&& build) const {
    std::lock_guard lock(mutex_);
    auto it = table_.find(key);
    if (it == table_.end()) it = table_.emplace(key, build()).first;
    return it->second;
  }

 private:
  mutable std::mutex mutex_;
  mutable std::map<Key, Value> table_;
};

}  // namespace equicohom
