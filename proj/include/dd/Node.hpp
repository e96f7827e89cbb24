#pragma once

#include "dd/ComplexTable.hpp"
#include "dd/Definitions.hpp"

#include <array>
#include <cstddef>
#include <cstdint>

namespace dd {

template <class NodeT> struct Edge {
  NodeT* node = nullptr;
  ComplexRef w{};

  [[nodiscard]] bool isTerminal() const { return node->isTerminal(); }

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Edge whose weight has not been interned yet. All arithmetic inside the
/// package runs on these; weights are interned once a node is created.
template <class NodeT> struct CachedEdge {
  NodeT* node = nullptr;
  ComplexValue w{};

  [[nodiscard]] bool isTerminal() const { return node->isTerminal(); }
};

/// Decision diagram node with `Arity` outgoing edges.
/// Vector nodes: e[0] is the |0> successor, e[1] the |1> successor.
/// Matrix nodes: e[2*i + j] is the U_ij quadrant (row i, column j).
template <std::size_t Arity> struct Node {
  static constexpr std::size_t ARITY = Arity;

  std::array<Edge<Node>, Arity> e{};
  Node* next = nullptr; // unique table chain / free list
  std::uint64_t id = 0;
  std::uint32_t ref = 0;
  Qubit level = TERMINAL_LEVEL;

  [[nodiscard]] bool isTerminal() const { return level == TERMINAL_LEVEL; }

  /// Shared terminal. It is immutable and never collected, so all engines
  /// may point at it.
  static Node* terminal() {
    static Node t{{}, nullptr, 0, IMMORTAL, TERMINAL_LEVEL};
    return &t;
  }
};

using vNode = Node<2>;
using mNode = Node<4>;
using vEdge = Edge<vNode>;
using mEdge = Edge<mNode>;
using vCachedEdge = CachedEdge<vNode>;
using mCachedEdge = CachedEdge<mNode>;

/// Root of a state vector decision diagram over `numQubits` qubits.
struct VectorDD {
  vEdge root{};
  std::size_t numQubits = 0;

  friend bool operator==(const VectorDD&, const VectorDD&) = default;
};

/// Root of an operator decision diagram over `numQubits` qubits.
struct MatrixDD {
  mEdge root{};
  std::size_t numQubits = 0;

  friend bool operator==(const MatrixDD&, const MatrixDD&) = default;
};

} // namespace dd
