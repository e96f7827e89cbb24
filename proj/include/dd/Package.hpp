#pragma once

#include "dd/ComplexTable.hpp"
#include "dd/ComputeTable.hpp"
#include "dd/Definitions.hpp"
#include "dd/EngineConfig.hpp"
#include "dd/Node.hpp"
#include "dd/UniqueTable.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dd {

/// Thrown when two decision diagrams over different qubit counts are combined.
class SizeMismatchError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

template <class NodeT> struct AddKey {
  NodeT* a = nullptr;
  ComplexValue wa{};
  NodeT* b = nullptr;
  ComplexValue wb{};
  friend bool operator==(const AddKey&, const AddKey&) = default;
};

template <class A, class B> struct PairKey {
  A* a = nullptr;
  B* b = nullptr;
  friend bool operator==(const PairKey&, const PairKey&) = default;
};

std::size_t hashMix(std::size_t h, std::size_t v);
std::size_t hashComplex(const ComplexValue& c);

struct AddKeyHash {
  template <class NodeT> std::size_t operator()(const AddKey<NodeT>& k) const {
    std::size_t h = hashMix(reinterpret_cast<std::uintptr_t>(k.a), reinterpret_cast<std::uintptr_t>(k.b));
    h = hashMix(h, hashComplex(k.wa));
    return hashMix(h, hashComplex(k.wb));
  }
};

struct PairKeyHash {
  template <class A, class B> std::size_t operator()(const PairKey<A, B>& k) const {
    return hashMix(reinterpret_cast<std::uintptr_t>(k.a) >> 4U, reinterpret_cast<std::uintptr_t>(k.b) >> 4U);
  }
};

struct PointerHash {
  template <class T> std::size_t operator()(T* p) const {
    return hashMix(0, reinterpret_cast<std::uintptr_t>(p) >> 4U);
  }
};

} // namespace detail

/// Owns the unique tables, the complex table and the compute tables of one
/// decision diagram engine. Not thread-safe; use one package per thread.
///
/// Results returned by operations are unreferenced. Anything that must
/// survive a call to `garbageCollect` has to be pinned with `incRef` first.
class Package {
public:
  explicit Package(EngineConfig config = {});

  Package(const Package&) = delete;
  Package& operator=(const Package&) = delete;

  [[nodiscard]] const EngineConfig& config() const { return config_; }
  [[nodiscard]] fp tolerance() const { return config_.tolerance; }
  ComplexTable& complexTable() { return complex_; }

  ComplexRef intern(fp re, fp im) { return complex_.lookup(re, im); }
  ComplexRef intern(const ComplexValue& c) { return complex_.lookup(c); }

  [[nodiscard]] vEdge vectorZero() const { return {vNode::terminal(), complex_.zero()}; }
  [[nodiscard]] mEdge matrixZero() const { return {mNode::terminal(), complex_.zero()}; }
  [[nodiscard]] vEdge vectorOne() const { return {vNode::terminal(), complex_.one()}; }
  [[nodiscard]] mEdge matrixOne() const { return {mNode::terminal(), complex_.one()}; }

  // --- construction -------------------------------------------------------

  /// Normalizes the successors (L2 norm, first nonzero weight made real
  /// positive), deduplicates the node and returns an edge carrying the
  /// extracted factor. Non-zero successors must sit at `level - 1`.
  vEdge makeVectorNode(Qubit level, const std::array<vEdge, 2>& e);
  /// Normalizes by the largest-magnitude successor weight (lowest index on
  /// ties) and deduplicates.
  mEdge makeMatrixNode(Qubit level, const std::array<mEdge, 4>& e);

  vCachedEdge makeVectorNode(Qubit level, std::array<vCachedEdge, 2> e);
  mCachedEdge makeMatrixNode(Qubit level, std::array<mCachedEdge, 4> e);

  /// `bits` is written q_{n-1} ... q_0.
  VectorDD basisState(std::size_t numQubits, std::string_view bits);
  VectorDD fromDenseVector(std::span<const ComplexValue> amplitudes);
  /// Row-major 2^n x 2^n matrix.
  MatrixDD fromDenseMatrix(std::span<const ComplexValue> entries);
  MatrixDD identity(std::size_t numQubits);

  /// Single-target gate `m` (row-major 2x2) on `target`, applied only if all
  /// `controls` are |1>.
  MatrixDD makeGateDD(const GateMatrix& m, std::size_t numQubits, std::span<const Qubit> controls,
                      Qubit target);
  MatrixDD makeSwapDD(std::size_t numQubits, std::span<const Qubit> controls, Qubit target0,
                      Qubit target1);

  // --- arithmetic ---------------------------------------------------------

  VectorDD add(const VectorDD& x, const VectorDD& y);
  MatrixDD add(const MatrixDD& x, const MatrixDD& y);
  VectorDD multiply(const MatrixDD& m, const VectorDD& v);
  /// Returns a * b, i.e. b is applied first.
  MatrixDD multiply(const MatrixDD& a, const MatrixDD& b);
  /// `upper` occupies the more significant qubits of the result.
  MatrixDD kron(const MatrixDD& upper, const MatrixDD& lower);
  MatrixDD conjugateTranspose(const MatrixDD& m);
  /// <x|y>
  ComplexValue innerProduct(const VectorDD& x, const VectorDD& y);
  VectorDD scale(const VectorDD& v, const ComplexValue& factor);
  MatrixDD scale(const MatrixDD& m, const ComplexValue& factor);

  // --- queries ------------------------------------------------------------

  [[nodiscard]] static ComplexValue amplitude(const VectorDD& v, std::string_view bits);
  [[nodiscard]] static ComplexValue amplitude(const VectorDD& v, std::uint64_t index);
  [[nodiscard]] static ComplexValue entry(const MatrixDD& m, std::uint64_t row, std::uint64_t col);
  [[nodiscard]] static std::vector<ComplexValue> toDenseVector(const VectorDD& v);
  [[nodiscard]] static std::vector<ComplexValue> toDenseMatrix(const MatrixDD& m);
  [[nodiscard]] static std::size_t nodeCount(const VectorDD& v);
  [[nodiscard]] static std::size_t nodeCount(const MatrixDD& m);

  /// Number of basis states with non-zero amplitude, by path counting.
  /// Saturates at UINT64_MAX.
  [[nodiscard]] static std::uint64_t countNonZero(const VectorDD& v);

  /// Unnormalized probabilities of measuring |0> and |1> on `qubit`.
  [[nodiscard]] static std::pair<fp, fp> qubitProbabilities(const VectorDD& v, Qubit qubit);

  /// Projects `qubit` onto `outcome` and renormalizes. With `relocate`, the
  /// surviving branch becomes the |0> branch (reset semantics). Throws
  /// std::invalid_argument if the outcome has zero probability.
  VectorDD collapse(const VectorDD& v, Qubit qubit, bool outcome, bool relocate = false);

  // --- memory -------------------------------------------------------------

  static void incRef(const VectorDD& v) { incRef(v.root); }
  static void decRef(const VectorDD& v) { decRef(v.root); }
  static void incRef(const MatrixDD& m) { incRef(m.root); }
  static void decRef(const MatrixDD& m) { decRef(m.root); }

  /// Sweeps unreferenced nodes and complex numbers and flushes all compute
  /// tables. Without `force`, only runs once the live node count exceeds
  /// the configured threshold. Returns the number of collected nodes.
  std::size_t garbageCollect(bool force = false);

  [[nodiscard]] std::size_t liveNodes() const { return vUnique_.liveNodes() + mUnique_.liveNodes(); }
  [[nodiscard]] std::size_t liveComplexEntries() const { return complex_.size(); }
  [[nodiscard]] std::size_t computeTableLookups() const;
  [[nodiscard]] std::size_t computeTableHits() const;

private:
  template <class NodeT> static void incRef(const Edge<NodeT>& e);
  template <class NodeT> static void decRef(const Edge<NodeT>& e);

  template <class NodeT> CachedEdge<NodeT> cachedZero() const { return {NodeT::terminal(), 0.}; }
  template <class NodeT> Edge<NodeT> internEdge(const CachedEdge<NodeT>& e);
  [[nodiscard]] bool isZero(const ComplexValue& c) const { return complex_.approximatelyZero(c); }

  template <class NodeT> void checkSuccessorLevels(Qubit level, std::span<const CachedEdge<NodeT>> e) const;

  vCachedEdge addRec(vCachedEdge x, vCachedEdge y);
  mCachedEdge addRec(mCachedEdge x, mCachedEdge y);
  vCachedEdge multiplyRec(mNode* m, vNode* v);
  mCachedEdge multiplyRec(mNode* a, mNode* b);
  mCachedEdge kronRec(mNode* upper, mNode* lower, Qubit offset);
  mCachedEdge adjointRec(mNode* m);
  ComplexValue innerProductRec(vNode* x, vNode* y);
  mCachedEdge identityRec(std::size_t numQubits);

  vCachedEdge fromDenseRec(std::span<const ComplexValue> amplitudes, Qubit level);
  mCachedEdge fromDenseRec(std::span<const ComplexValue> entries, std::size_t dim, std::size_t row,
                           std::size_t col, std::size_t size, Qubit level);

  EngineConfig config_;
  std::uint64_t nextId_ = 0;
  ComplexTable complex_;
  UniqueTable<vNode> vUnique_;
  UniqueTable<mNode> mUnique_;

  ComputeTable<detail::AddKey<vNode>, vCachedEdge, detail::AddKeyHash> vAdd_;
  ComputeTable<detail::AddKey<mNode>, mCachedEdge, detail::AddKeyHash> mAdd_;
  ComputeTable<detail::PairKey<mNode, vNode>, vCachedEdge, detail::PairKeyHash> mvMul_;
  ComputeTable<detail::PairKey<mNode, mNode>, mCachedEdge, detail::PairKeyHash> mmMul_;
  ComputeTable<detail::PairKey<mNode, mNode>, mCachedEdge, detail::PairKeyHash> kron_;
  ComputeTable<mNode*, mCachedEdge, detail::PointerHash> adjoint_;
  ComputeTable<detail::PairKey<vNode, vNode>, ComplexValue, detail::PairKeyHash> inner_;
  std::vector<mCachedEdge> identities_;
};

} // namespace dd
