#pragma once

#include "dd/Node.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

namespace dd {

/// Hash-consing table with one bucket array per qubit level. Nodes are owned
/// by the table; handles stay valid until the node is swept.
template <class NodeT> class UniqueTable {
public:
  using EdgeArray = std::array<Edge<NodeT>, NodeT::ARITY>;

  UniqueTable(std::size_t buckets, std::uint64_t* idCounter)
      : buckets_(buckets), mask_(buckets - 1), idCounter_(idCounter) {}

  UniqueTable(const UniqueTable&) = delete;
  UniqueTable& operator=(const UniqueTable&) = delete;

  /// Returns the node with the given level and successors, creating it if
  /// necessary. Successor weights must already be interned.
  NodeT* lookup(const Qubit level, const EdgeArray& e) {
    const auto lvl = static_cast<std::size_t>(level);
    if (lvl >= tables_.size()) {
      tables_.resize(lvl + 1);
    }
    auto& table = tables_[lvl];
    if (table.empty()) {
      table.assign(buckets_, nullptr);
    }
    const std::size_t bucket = hash(e) & mask_;
    for (NodeT* n = table[bucket]; n != nullptr; n = n->next) {
      if (n->e == e) {
        ++hits_;
        return n;
      }
    }
    NodeT* n = allocate();
    n->e = e;
    n->level = level;
    n->ref = 0;
    n->id = ++*idCounter_;
    n->next = table[bucket];
    table[bucket] = n;
    ++live_;
    return n;
  }

  /// Removes every node with a zero reference count.
  std::size_t garbageCollect() {
    std::size_t collected = 0;
    for (auto& table : tables_) {
      for (auto& head : table) {
        NodeT** link = &head;
        while (*link != nullptr) {
          NodeT* n = *link;
          if (n->ref == 0U) {
            *link = n->next;
            n->id = 0;
            n->next = free_;
            free_ = n;
            ++collected;
          } else {
            link = &n->next;
          }
        }
      }
    }
    live_ -= collected;
    return collected;
  }

  [[nodiscard]] std::size_t liveNodes() const { return live_; }
  [[nodiscard]] std::size_t hits() const { return hits_; }

private:
  static std::size_t hash(const EdgeArray& e) {
    std::size_t h = 0;
    for (const auto& edge : e) {
      const auto p = reinterpret_cast<std::uintptr_t>(edge.node);
      h = (h ^ (p >> 4U)) * 0x100000001B3ULL;
      h = (h ^ std::hash<ComplexRef>{}(edge.w)) * 0x100000001B3ULL;
    }
    return h ^ (h >> 29U);
  }

  NodeT* allocate() {
    if (free_ != nullptr) {
      NodeT* n = free_;
      free_ = n->next;
      return n;
    }
    return &storage_.emplace_back();
  }

  std::size_t buckets_;
  std::size_t mask_;
  std::uint64_t* idCounter_;
  std::vector<std::vector<NodeT*>> tables_;
  std::deque<NodeT> storage_;
  NodeT* free_ = nullptr;
  std::size_t live_ = 0;
  std::size_t hits_ = 0;
};

} // namespace dd
