#include "dd/Package.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace dd {

namespace detail {

std::size_t hashMix(std::size_t h, std::size_t v) {
  h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6U) + (h >> 2U);
  h *= 0xBF58476D1CE4E5B9ULL;
  return h ^ (h >> 31U);
}

std::size_t hashComplex(const ComplexValue& c) {
  std::uint64_t re = 0;
  std::uint64_t im = 0;
  const fp r = c.real();
  const fp i = c.imag();
  std::memcpy(&re, &r, sizeof(fp));
  std::memcpy(&im, &i, sizeof(fp));
  return hashMix(re, im);
}

} // namespace detail

namespace {

std::size_t qubitsToDimension(std::size_t size, const char* what) {
  if (size == 0 || !std::has_single_bit(size)) {
    throw std::invalid_argument(std::string(what) + " size must be a power of two");
  }
  return static_cast<std::size_t>(std::countr_zero(size));
}

void checkBits(std::size_t numQubits, std::string_view bits) {
  if (bits.size() != numQubits) {
    throw std::invalid_argument("bitstring length " + std::to_string(bits.size()) +
                                " does not match qubit count " + std::to_string(numQubits));
  }
  for (const char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("bitstring may only contain '0' and '1'");
    }
  }
}

template <class DD> void checkSameSize(const DD& x, const DD& y) {
  if (x.numQubits != y.numQubits) {
    throw SizeMismatchError("decision diagrams act on " + std::to_string(x.numQubits) + " and " +
                            std::to_string(y.numQubits) + " qubits");
  }
}

template <class NodeT> CachedEdge<NodeT> child(const NodeT* n, std::size_t i, const ComplexValue& w) {
  return {n->e[i].node, w * n->e[i].w.value()};
}

} // namespace

Package::Package(EngineConfig config)
    : config_(config), complex_((config.validate(), config.tolerance)),
      vUnique_(config.uniqueTableBuckets, &nextId_), mUnique_(config.uniqueTableBuckets, &nextId_),
      vAdd_(config.computeTableEntries), mAdd_(config.computeTableEntries),
      mvMul_(config.computeTableEntries), mmMul_(config.computeTableEntries),
      kron_(config.computeTableEntries), adjoint_(config.computeTableEntries),
      inner_(config.computeTableEntries) {}

// --- references -------------------------------------------------------------

template <class NodeT> void Package::incRef(const Edge<NodeT>& e) {
  ComplexTable::incRef(e.w);
  if (e.node->isTerminal()) {
    return;
  }
  if (e.node->ref++ == 0U) {
    for (const auto& c : e.node->e) {
      incRef(c);
    }
  }
}

template <class NodeT> void Package::decRef(const Edge<NodeT>& e) {
  ComplexTable::decRef(e.w);
  if (e.node->isTerminal()) {
    return;
  }
  if (e.node->ref == 0U) {
    throw std::logic_error("reference count underflow on node " + std::to_string(e.node->id));
  }
  if (--e.node->ref == 0U) {
    for (const auto& c : e.node->e) {
      decRef(c);
    }
  }
}

std::size_t Package::garbageCollect(const bool force) {
  if (!force && liveNodes() < config_.gcThreshold) {
    return 0;
  }
  const std::size_t collected = vUnique_.garbageCollect() + mUnique_.garbageCollect();
  complex_.garbageCollect();
  vAdd_.clear();
  mAdd_.clear();
  mvMul_.clear();
  mmMul_.clear();
  kron_.clear();
  adjoint_.clear();
  inner_.clear();
  identities_.clear();
  return collected;
}

std::size_t Package::computeTableLookups() const {
  return vAdd_.lookups() + mAdd_.lookups() + mvMul_.lookups() + mmMul_.lookups() + kron_.lookups() +
         adjoint_.lookups() + inner_.lookups();
}

std::size_t Package::computeTableHits() const {
  return vAdd_.hits() + mAdd_.hits() + mvMul_.hits() + mmMul_.hits() + kron_.hits() + adjoint_.hits() +
         inner_.hits();
}

// --- node construction ------------------------------------------------------

template <class NodeT> Edge<NodeT> Package::internEdge(const CachedEdge<NodeT>& e) {
  const ComplexRef w = complex_.lookup(e.w);
  if (w == complex_.zero()) {
    return {NodeT::terminal(), w};
  }
  return {e.node, w};
}

template <class NodeT>
void Package::checkSuccessorLevels(const Qubit level, std::span<const CachedEdge<NodeT>> e) const {
  if (level < 0) {
    throw std::invalid_argument("node level " + std::to_string(level) + " out of range");
  }
  for (const auto& c : e) {
    if (isZero(c.w)) {
      continue;
    }
    if (c.node->level != level - 1) {
      throw std::invalid_argument("successor at level " + std::to_string(c.node->level) +
                                  " cannot hang below a node at level " + std::to_string(level));
    }
  }
}

vCachedEdge Package::makeVectorNode(const Qubit level, std::array<vCachedEdge, 2> e) {
  checkSuccessorLevels<vNode>(level, e);
  const auto zero = cachedZero<vNode>();
  for (;;) {
    for (auto& c : e) {
      if (isZero(c.w)) {
        c = zero;
      }
    }
    const auto first = std::find_if(e.begin(), e.end(), [&](const auto& c) { return c.w != 0.; });
    if (first == e.end()) {
      return zero;
    }
    const fp norm = std::sqrt(std::norm(e[0].w) + std::norm(e[1].w));
    const fp firstMag = std::abs(first->w);
    const ComplexValue factor = norm * (first->w / firstMag);

    std::array<vEdge, 2> interned{};
    bool snapped = false;
    for (std::size_t i = 0; i < 2; ++i) {
      if (e[i].w == 0.) {
        interned[i] = vectorZero();
        continue;
      }
      const ComplexValue w = (&e[i] == first) ? ComplexValue{firstMag / norm, 0.} : e[i].w / factor;
      const ComplexRef ref = complex_.lookup(w);
      if (ref == complex_.zero()) {
        e[i] = zero;
        snapped = true;
        break;
      }
      interned[i] = {e[i].node, ref};
    }
    if (snapped) {
      continue;
    }
    return {vUnique_.lookup(level, interned), factor};
  }
}

mCachedEdge Package::makeMatrixNode(const Qubit level, std::array<mCachedEdge, 4> e) {
  checkSuccessorLevels<mNode>(level, e);
  const auto zero = cachedZero<mNode>();
  const fp tol = tolerance();
  for (;;) {
    fp maxMag = 0.;
    for (auto& c : e) {
      if (isZero(c.w)) {
        c = zero;
      }
      maxMag = std::max(maxMag, std::abs(c.w));
    }
    if (maxMag == 0.) {
      return zero;
    }
    std::size_t pivot = 0;
    while (std::abs(e[pivot].w) < maxMag - tol) {
      ++pivot;
    }
    const ComplexValue factor = e[pivot].w;

    std::array<mEdge, 4> interned{};
    bool snapped = false;
    for (std::size_t i = 0; i < 4; ++i) {
      if (e[i].w == 0.) {
        interned[i] = matrixZero();
        continue;
      }
      if (i == pivot) {
        interned[i] = {e[i].node, complex_.one()};
        continue;
      }
      const ComplexRef ref = complex_.lookup(e[i].w / factor);
      if (ref == complex_.zero()) {
        e[i] = zero;
        snapped = true;
        break;
      }
      interned[i] = {e[i].node, ref};
    }
    if (snapped) {
      continue;
    }
    return {mUnique_.lookup(level, interned), factor};
  }
}

vEdge Package::makeVectorNode(const Qubit level, const std::array<vEdge, 2>& e) {
  return internEdge(makeVectorNode(level, std::array<vCachedEdge, 2>{{{e[0].node, e[0].w.value()},
                                                                      {e[1].node, e[1].w.value()}}}));
}

mEdge Package::makeMatrixNode(const Qubit level, const std::array<mEdge, 4>& e) {
  std::array<mCachedEdge, 4> c{};
  for (std::size_t i = 0; i < 4; ++i) {
    c[i] = {e[i].node, e[i].w.value()};
  }
  return internEdge(makeMatrixNode(level, c));
}

VectorDD Package::basisState(const std::size_t numQubits, const std::string_view bits) {
  checkBits(numQubits, bits);
  vCachedEdge e{vNode::terminal(), 1.};
  for (std::size_t q = 0; q < numQubits; ++q) {
    const bool one = bits[numQubits - 1 - q] == '1';
    std::array<vCachedEdge, 2> succ{cachedZero<vNode>(), cachedZero<vNode>()};
    succ[one ? 1 : 0] = e;
    e = makeVectorNode(static_cast<Qubit>(q), succ);
  }
  return {internEdge(e), numQubits};
}

vCachedEdge Package::fromDenseRec(std::span<const ComplexValue> amplitudes, const Qubit level) {
  if (level < 0) {
    return {vNode::terminal(), amplitudes[0]};
  }
  const auto half = amplitudes.size() / 2;
  return makeVectorNode(level, {fromDenseRec(amplitudes.first(half), level - 1),
                                fromDenseRec(amplitudes.subspan(half), level - 1)});
}

VectorDD Package::fromDenseVector(std::span<const ComplexValue> amplitudes) {
  const auto n = qubitsToDimension(amplitudes.size(), "vector");
  return {internEdge(fromDenseRec(amplitudes, static_cast<Qubit>(n) - 1)), n};
}

mCachedEdge Package::fromDenseRec(std::span<const ComplexValue> entries, const std::size_t dim,
                                  const std::size_t row, const std::size_t col, const std::size_t size,
                                  const Qubit level) {
  if (level < 0) {
    return {mNode::terminal(), entries[row * dim + col]};
  }
  const auto half = size / 2;
  std::array<mCachedEdge, 4> e{};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      e[2 * i + j] = fromDenseRec(entries, dim, row + i * half, col + j * half, half, level - 1);
    }
  }
  return makeMatrixNode(level, e);
}

MatrixDD Package::fromDenseMatrix(std::span<const ComplexValue> entries) {
  const auto dim = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(entries.size()))));
  if (dim * dim != entries.size()) {
    throw std::invalid_argument("matrix must be square");
  }
  const auto n = qubitsToDimension(dim, "matrix");
  return {internEdge(fromDenseRec(entries, dim, 0, 0, dim, static_cast<Qubit>(n) - 1)), n};
}

mCachedEdge Package::identityRec(const std::size_t numQubits) {
  if (identities_.empty()) {
    identities_.push_back({mNode::terminal(), 1.});
  }
  while (identities_.size() <= numQubits) {
    const auto level = static_cast<Qubit>(identities_.size() - 1);
    const auto below = identities_.back();
    identities_.push_back(makeMatrixNode(level, {below, cachedZero<mNode>(), cachedZero<mNode>(), below}));
  }
  return identities_[numQubits];
}

MatrixDD Package::identity(const std::size_t numQubits) {
  if (numQubits == 0) {
    throw std::invalid_argument("identity requires at least one qubit");
  }
  return {internEdge(identityRec(numQubits)), numQubits};
}

MatrixDD Package::makeGateDD(const GateMatrix& m, const std::size_t numQubits,
                             std::span<const Qubit> controls, const Qubit target) {
  const auto n = static_cast<Qubit>(numQubits);
  if (target < 0 || target >= n) {
    throw std::invalid_argument("target qubit " + std::to_string(target) + " out of range");
  }
  const std::set<Qubit> ctrl(controls.begin(), controls.end());
  if (ctrl.size() != controls.size()) {
    throw std::invalid_argument("duplicate control qubit");
  }
  for (const auto c : ctrl) {
    if (c < 0 || c >= n) {
      throw std::invalid_argument("control qubit " + std::to_string(c) + " out of range");
    }
    if (c == target) {
      throw std::invalid_argument("qubit " + std::to_string(c) + " is both control and target");
    }
  }

  const auto zero = cachedZero<mNode>();
  std::array<mCachedEdge, 4> em{};
  for (std::size_t i = 0; i < 4; ++i) {
    em[i] = isZero(m[i]) ? zero : mCachedEdge{mNode::terminal(), m[i]};
  }

  // levels below the target: every quadrant of the gate gets its own copy
  for (Qubit z = 0; z < target; ++z) {
    const bool isControl = ctrl.contains(z);
    for (std::size_t i = 0; i < 4; ++i) {
      const bool diagonal = (i / 2) == (i % 2);
      if (isControl) {
        const auto idle = diagonal ? identityRec(static_cast<std::size_t>(z)) : zero;
        em[i] = makeMatrixNode(z, {idle, zero, zero, em[i]});
      } else {
        em[i] = makeMatrixNode(z, {em[i], zero, zero, em[i]});
      }
    }
  }
  auto e = makeMatrixNode(target, em);
  for (Qubit q = target + 1; q < n; ++q) {
    if (ctrl.contains(q)) {
      e = makeMatrixNode(q, {identityRec(static_cast<std::size_t>(q)), zero, zero, e});
    } else {
      e = makeMatrixNode(q, {e, zero, zero, e});
    }
  }
  return {internEdge(e), numQubits};
}

MatrixDD Package::makeSwapDD(const std::size_t numQubits, std::span<const Qubit> controls,
                             const Qubit target0, const Qubit target1) {
  if (target0 == target1) {
    throw std::invalid_argument("swap targets must differ");
  }
  static constexpr GateMatrix X{0., 1., 1., 0.};
  const std::array<Qubit, 1> c0{target0};
  const auto outer = makeGateDD(X, numQubits, c0, target1);
  std::vector<Qubit> innerControls(controls.begin(), controls.end());
  innerControls.push_back(target1);
  const auto inner = makeGateDD(X, numQubits, innerControls, target0);
  return multiply(outer, multiply(inner, outer));
}

// --- addition ---------------------------------------------------------------

vCachedEdge Package::addRec(vCachedEdge x, vCachedEdge y) {
  if (isZero(x.w)) {
    return isZero(y.w) ? cachedZero<vNode>() : y;
  }
  if (isZero(y.w)) {
    return x;
  }
  if (x.node == y.node) {
    const auto w = x.w + y.w;
    return isZero(w) ? cachedZero<vNode>() : vCachedEdge{x.node, w};
  }
  if (x.node->level != y.node->level) {
    throw std::logic_error("addition of nodes on different levels");
  }
  const detail::AddKey<vNode> key{x.node, x.w, y.node, y.w};
  if (const auto* hit = vAdd_.lookup(key)) {
    return *hit;
  }
  std::array<vCachedEdge, 2> r{};
  for (std::size_t i = 0; i < 2; ++i) {
    r[i] = addRec(child(x.node, i, x.w), child(y.node, i, y.w));
  }
  const auto result = makeVectorNode(x.node->level, r);
  vAdd_.insert(key, result);
  return result;
}

mCachedEdge Package::addRec(mCachedEdge x, mCachedEdge y) {
  if (isZero(x.w)) {
    return isZero(y.w) ? cachedZero<mNode>() : y;
  }
  if (isZero(y.w)) {
    return x;
  }
  if (x.node == y.node) {
    const auto w = x.w + y.w;
    return isZero(w) ? cachedZero<mNode>() : mCachedEdge{x.node, w};
  }
  if (x.node->level != y.node->level) {
    throw std::logic_error("addition of nodes on different levels");
  }
  const detail::AddKey<mNode> key{x.node, x.w, y.node, y.w};
  if (const auto* hit = mAdd_.lookup(key)) {
    return *hit;
  }
  std::array<mCachedEdge, 4> r{};
  for (std::size_t i = 0; i < 4; ++i) {
    r[i] = addRec(child(x.node, i, x.w), child(y.node, i, y.w));
  }
  const auto result = makeMatrixNode(x.node->level, r);
  mAdd_.insert(key, result);
  return result;
}

VectorDD Package::add(const VectorDD& x, const VectorDD& y) {
  checkSameSize(x, y);
  if (y.root.w == complex_.zero()) {
    return x;
  }
  if (x.root.w == complex_.zero()) {
    return y;
  }
  const auto r = addRec(vCachedEdge{x.root.node, x.root.w.value()}, vCachedEdge{y.root.node, y.root.w.value()});
  return {internEdge(r), x.numQubits};
}

MatrixDD Package::add(const MatrixDD& x, const MatrixDD& y) {
  checkSameSize(x, y);
  if (y.root.w == complex_.zero()) {
    return x;
  }
  if (x.root.w == complex_.zero()) {
    return y;
  }
  const auto r = addRec(mCachedEdge{x.root.node, x.root.w.value()}, mCachedEdge{y.root.node, y.root.w.value()});
  return {internEdge(r), x.numQubits};
}

// --- multiplication ---------------------------------------------------------

vCachedEdge Package::multiplyRec(mNode* m, vNode* v) {
  if (m->isTerminal()) {
    return {vNode::terminal(), 1.};
  }
  const detail::PairKey<mNode, vNode> key{m, v};
  if (const auto* hit = mvMul_.lookup(key)) {
    return *hit;
  }
  std::array<vCachedEdge, 2> r{};
  for (std::size_t i = 0; i < 2; ++i) {
    vCachedEdge acc = cachedZero<vNode>();
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& me = m->e[2 * i + k];
      const auto& ve = v->e[k];
      if (me.w == complex_.zero() || ve.w == complex_.zero()) {
        continue;
      }
      auto t = multiplyRec(me.node, ve.node);
      t.w *= me.w.value() * ve.w.value();
      acc = addRec(acc, t);
    }
    r[i] = acc;
  }
  const auto result = makeVectorNode(m->level, r);
  mvMul_.insert(key, result);
  return result;
}

mCachedEdge Package::multiplyRec(mNode* a, mNode* b) {
  if (a->isTerminal()) {
    return {mNode::terminal(), 1.};
  }
  const detail::PairKey<mNode, mNode> key{a, b};
  if (const auto* hit = mmMul_.lookup(key)) {
    return *hit;
  }
  std::array<mCachedEdge, 4> r{};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      mCachedEdge acc = cachedZero<mNode>();
      for (std::size_t k = 0; k < 2; ++k) {
        const auto& ae = a->e[2 * i + k];
        const auto& be = b->e[2 * k + j];
        if (ae.w == complex_.zero() || be.w == complex_.zero()) {
          continue;
        }
        auto t = multiplyRec(ae.node, be.node);
        t.w *= ae.w.value() * be.w.value();
        acc = addRec(acc, t);
      }
      r[2 * i + j] = acc;
    }
  }
  const auto result = makeMatrixNode(a->level, r);
  mmMul_.insert(key, result);
  return result;
}

VectorDD Package::multiply(const MatrixDD& m, const VectorDD& v) {
  if (m.numQubits != v.numQubits) {
    throw SizeMismatchError("matrix acts on " + std::to_string(m.numQubits) + " qubits, vector has " +
                            std::to_string(v.numQubits));
  }
  if (m.root.w == complex_.zero() || v.root.w == complex_.zero()) {
    return {vectorZero(), v.numQubits};
  }
  auto r = multiplyRec(m.root.node, v.root.node);
  r.w *= m.root.w.value() * v.root.w.value();
  return {internEdge(r), v.numQubits};
}

MatrixDD Package::multiply(const MatrixDD& a, const MatrixDD& b) {
  checkSameSize(a, b);
  if (a.root.w == complex_.zero() || b.root.w == complex_.zero()) {
    return {matrixZero(), a.numQubits};
  }
  auto r = multiplyRec(a.root.node, b.root.node);
  r.w *= a.root.w.value() * b.root.w.value();
  return {internEdge(r), a.numQubits};
}

// --- tensor product and adjoint ---------------------------------------------

mCachedEdge Package::kronRec(mNode* upper, mNode* lower, const Qubit offset) {
  if (upper->isTerminal()) {
    return {lower, 1.};
  }
  const detail::PairKey<mNode, mNode> key{upper, lower};
  if (const auto* hit = kron_.lookup(key)) {
    return *hit;
  }
  std::array<mCachedEdge, 4> r{};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& e = upper->e[i];
    if (e.w == complex_.zero()) {
      r[i] = cachedZero<mNode>();
      continue;
    }
    r[i] = kronRec(e.node, lower, offset);
    r[i].w *= e.w.value();
  }
  const auto result = makeMatrixNode(upper->level + offset, r);
  kron_.insert(key, result);
  return result;
}

MatrixDD Package::kron(const MatrixDD& upper, const MatrixDD& lower) {
  const auto n = upper.numQubits + lower.numQubits;
  if (upper.root.w == complex_.zero() || lower.root.w == complex_.zero()) {
    return {matrixZero(), n};
  }
  auto r = kronRec(upper.root.node, lower.root.node, static_cast<Qubit>(lower.numQubits));
  r.w *= upper.root.w.value() * lower.root.w.value();
  return {internEdge(r), n};
}

mCachedEdge Package::adjointRec(mNode* m) {
  if (m->isTerminal()) {
    return {m, 1.};
  }
  if (const auto* hit = adjoint_.lookup(m)) {
    return *hit;
  }
  std::array<mCachedEdge, 4> r{};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const auto& e = m->e[2 * j + i];
      if (e.w == complex_.zero()) {
        r[2 * i + j] = cachedZero<mNode>();
        continue;
      }
      auto t = adjointRec(e.node);
      t.w *= std::conj(e.w.value());
      r[2 * i + j] = t;
    }
  }
  const auto result = makeMatrixNode(m->level, r);
  adjoint_.insert(m, result);
  return result;
}

MatrixDD Package::conjugateTranspose(const MatrixDD& m) {
  if (m.root.w == complex_.zero()) {
    return m;
  }
  auto r = adjointRec(m.root.node);
  r.w *= std::conj(m.root.w.value());
  return {internEdge(r), m.numQubits};
}

ComplexValue Package::innerProductRec(vNode* x, vNode* y) {
  if (x->isTerminal()) {
    return 1.;
  }
  const detail::PairKey<vNode, vNode> key{x, y};
  if (const auto* hit = inner_.lookup(key)) {
    return *hit;
  }
  ComplexValue sum = 0.;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& xe = x->e[i];
    const auto& ye = y->e[i];
    if (xe.w == complex_.zero() || ye.w == complex_.zero()) {
      continue;
    }
    sum += std::conj(xe.w.value()) * ye.w.value() * innerProductRec(xe.node, ye.node);
  }
  inner_.insert(key, sum);
  return sum;
}

ComplexValue Package::innerProduct(const VectorDD& x, const VectorDD& y) {
  checkSameSize(x, y);
  if (x.root.w == complex_.zero() || y.root.w == complex_.zero()) {
    return 0.;
  }
  return std::conj(x.root.w.value()) * y.root.w.value() * innerProductRec(x.root.node, y.root.node);
}

VectorDD Package::scale(const VectorDD& v, const ComplexValue& factor) {
  return {internEdge(vCachedEdge{v.root.node, v.root.w.value() * factor}), v.numQubits};
}

MatrixDD Package::scale(const MatrixDD& m, const ComplexValue& factor) {
  return {internEdge(mCachedEdge{m.root.node, m.root.w.value() * factor}), m.numQubits};
}

// --- queries ----------------------------------------------------------------

ComplexValue Package::amplitude(const VectorDD& v, const std::string_view bits) {
  checkBits(v.numQubits, bits);
  ComplexValue result = v.root.w.value();
  const vNode* n = v.root.node;
  while (!n->isTerminal() && result != 0.) {
    const bool one = bits[v.numQubits - 1 - static_cast<std::size_t>(n->level)] == '1';
    const auto& e = n->e[one ? 1 : 0];
    result *= e.w.value();
    n = e.node;
  }
  return result;
}

ComplexValue Package::amplitude(const VectorDD& v, const std::uint64_t index) {
  ComplexValue result = v.root.w.value();
  const vNode* n = v.root.node;
  while (!n->isTerminal() && result != 0.) {
    const auto& e = n->e[(index >> static_cast<unsigned>(n->level)) & 1U];
    result *= e.w.value();
    n = e.node;
  }
  return result;
}

ComplexValue Package::entry(const MatrixDD& m, const std::uint64_t row, const std::uint64_t col) {
  ComplexValue result = m.root.w.value();
  const mNode* n = m.root.node;
  while (!n->isTerminal() && result != 0.) {
    const auto shift = static_cast<unsigned>(n->level);
    const auto& e = n->e[2 * ((row >> shift) & 1U) + ((col >> shift) & 1U)];
    result *= e.w.value();
    n = e.node;
  }
  return result;
}

namespace {

void fillDense(const vNode* n, const ComplexValue& w, std::size_t offset, std::vector<ComplexValue>& out) {
  if (w == 0.) {
    return;
  }
  if (n->isTerminal()) {
    out[offset] = w;
    return;
  }
  const std::size_t half = std::size_t{1} << static_cast<unsigned>(n->level);
  for (std::size_t i = 0; i < 2; ++i) {
    fillDense(n->e[i].node, w * n->e[i].w.value(), offset + i * half, out);
  }
}

void fillDense(const mNode* n, const ComplexValue& w, std::size_t row, std::size_t col, std::size_t dim,
               std::vector<ComplexValue>& out) {
  if (w == 0.) {
    return;
  }
  if (n->isTerminal()) {
    out[row * dim + col] = w;
    return;
  }
  const std::size_t half = std::size_t{1} << static_cast<unsigned>(n->level);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const auto& e = n->e[2 * i + j];
      fillDense(e.node, w * e.w.value(), row + i * half, col + j * half, dim, out);
    }
  }
}

template <class NodeT> std::size_t countNodes(const NodeT* root) {
  std::unordered_set<const NodeT*> seen;
  std::vector<const NodeT*> stack{root};
  while (!stack.empty()) {
    const NodeT* n = stack.back();
    stack.pop_back();
    if (n->isTerminal() || !seen.insert(n).second) {
      continue;
    }
    for (const auto& e : n->e) {
      stack.push_back(e.node);
    }
  }
  return seen.size();
}

} // namespace

std::vector<ComplexValue> Package::toDenseVector(const VectorDD& v) {
  if (v.numQubits > 24) {
    throw std::invalid_argument("refusing to materialize a dense vector over more than 24 qubits");
  }
  std::vector<ComplexValue> out(std::size_t{1} << v.numQubits);
  fillDense(v.root.node, v.root.w.value(), 0, out);
  return out;
}

std::vector<ComplexValue> Package::toDenseMatrix(const MatrixDD& m) {
  if (m.numQubits > 12) {
    throw std::invalid_argument("refusing to materialize a dense matrix over more than 12 qubits");
  }
  const std::size_t dim = std::size_t{1} << m.numQubits;
  std::vector<ComplexValue> out(dim * dim);
  fillDense(m.root.node, m.root.w.value(), 0, 0, dim, out);
  return out;
}

std::size_t Package::nodeCount(const VectorDD& v) { return countNodes(v.root.node); }
std::size_t Package::nodeCount(const MatrixDD& m) { return countNodes(m.root.node); }

std::uint64_t Package::countNonZero(const VectorDD& v) {
  if (v.root.w.value() == 0.) {
    return 0;
  }
  constexpr auto MAX = std::numeric_limits<std::uint64_t>::max();
  std::unordered_map<const vNode*, std::uint64_t> memo;
  auto count = [&](auto&& self, const vNode* n) -> std::uint64_t {
    if (n->isTerminal()) {
      return 1;
    }
    if (const auto it = memo.find(n); it != memo.end()) {
      return it->second;
    }
    std::uint64_t total = 0;
    for (const auto& e : n->e) {
      if (e.w.value() == 0.) {
        continue;
      }
      const auto c = self(self, e.node);
      total = (MAX - total < c) ? MAX : total + c;
    }
    memo.emplace(n, total);
    return total;
  };
  return count(count, v.root.node);
}

std::pair<fp, fp> Package::qubitProbabilities(const VectorDD& v, const Qubit qubit) {
  if (qubit < 0 || static_cast<std::size_t>(qubit) >= v.numQubits) {
    throw std::invalid_argument("qubit " + std::to_string(qubit) + " out of range");
  }
  if (v.root.w.value() == 0.) {
    return {0., 0.};
  }
  // Nodes are L2-normalized, so every sub-vector has unit norm and the
  // probability mass flowing into a node is all that is needed.
  std::unordered_map<const vNode*, fp> mass{{v.root.node, std::norm(v.root.w.value())}};
  std::vector<const vNode*> frontier{v.root.node};
  for (Qubit level = static_cast<Qubit>(v.numQubits) - 1; level > qubit; --level) {
    std::unordered_map<const vNode*, fp> nextMass;
    std::vector<const vNode*> next;
    for (const auto* n : frontier) {
      const fp m = mass.at(n);
      for (const auto& e : n->e) {
        if (e.w.value() == 0.) {
          continue;
        }
        auto [it, inserted] = nextMass.try_emplace(e.node, 0.);
        if (inserted) {
          next.push_back(e.node);
        }
        it->second += m * std::norm(e.w.value());
      }
    }
    mass = std::move(nextMass);
    frontier = std::move(next);
  }
  fp p0 = 0.;
  fp p1 = 0.;
  for (const auto* n : frontier) {
    const fp m = mass.at(n);
    p0 += m * std::norm(n->e[0].w.value());
    p1 += m * std::norm(n->e[1].w.value());
  }
  return {p0, p1};
}

VectorDD Package::collapse(const VectorDD& v, const Qubit qubit, const bool outcome, const bool relocate) {
  if (qubit < 0 || static_cast<std::size_t>(qubit) >= v.numQubits) {
    throw std::invalid_argument("qubit " + std::to_string(qubit) + " out of range");
  }
  std::unordered_map<vNode*, vCachedEdge> memo;
  const auto zero = cachedZero<vNode>();
  auto project = [&](auto&& self, vNode* n) -> vCachedEdge {
    if (const auto it = memo.find(n); it != memo.end()) {
      return it->second;
    }
    std::array<vCachedEdge, 2> r{};
    if (n->level == qubit) {
      const auto& kept = n->e[outcome ? 1 : 0];
      r = {zero, zero};
      r[(outcome && !relocate) ? 1 : 0] = {kept.node, kept.w.value()};
    } else {
      for (std::size_t i = 0; i < 2; ++i) {
        const auto& e = n->e[i];
        if (e.w == complex_.zero()) {
          r[i] = zero;
          continue;
        }
        r[i] = self(self, e.node);
        r[i].w *= e.w.value();
      }
    }
    const auto result = makeVectorNode(n->level, r);
    memo.emplace(n, result);
    return result;
  };
  if (v.root.w == complex_.zero()) {
    throw std::invalid_argument("cannot collapse the zero vector");
  }
  auto r = project(project, v.root.node);
  r.w *= v.root.w.value();
  const fp norm = std::abs(r.w);
  if (isZero(r.w) || norm < tolerance()) {
    throw std::invalid_argument("measurement outcome " + std::to_string(static_cast<int>(outcome)) +
                                " on qubit " + std::to_string(qubit) + " has zero probability");
  }
  r.w /= norm;
  return {internEdge(r), v.numQubits};
}

template void Package::incRef(const vEdge&);
template void Package::incRef(const mEdge&);
template void Package::decRef(const vEdge&);
template void Package::decRef(const mEdge&);

} // namespace dd
