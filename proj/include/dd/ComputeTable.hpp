#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace dd {

/// Direct-mapped memoization cache. Colliding inserts overwrite.
template <class Key, class Value, class Hash = std::hash<Key>> class ComputeTable {
public:
  explicit ComputeTable(std::size_t entries) : table_(entries), mask_(entries - 1) {}

  void insert(const Key& key, const Value& value) {
    auto& entry = table_[Hash{}(key) & mask_];
    entry.key = key;
    entry.value = value;
    entry.valid = true;
  }

  [[nodiscard]] const Value* lookup(const Key& key) {
    ++lookups_;
    const auto& entry = table_[Hash{}(key) & mask_];
    if (entry.valid && entry.key == key) {
      ++hits_;
      return &entry.value;
    }
    return nullptr;
  }

  void clear() {
    for (auto& entry : table_) {
      entry.valid = false;
    }
  }

  [[nodiscard]] std::size_t lookups() const { return lookups_; }
  [[nodiscard]] std::size_t hits() const { return hits_; }

private:
  struct Entry {
    Key key{};
    Value value{};
    bool valid = false;
  };

  std::vector<Entry> table_;
  std::size_t mask_;
  std::size_t lookups_ = 0;
  std::size_t hits_ = 0;
};

} // namespace dd
