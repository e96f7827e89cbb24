#include "ec/Equivalence.hpp"

#include "sim/GateDD.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_set>

namespace ec {

std::string_view toString(Verdict v) {
  switch (v) {
  case Verdict::Equivalent:
    return "equivalent";
  case Verdict::EquivalentUpToGlobalPhase:
    return "equivalent_up_to_global_phase";
  case Verdict::NotEquivalent:
    return "not_equivalent";
  case Verdict::ProbablyEquivalent:
    return "probably_equivalent";
  case Verdict::NoInformation:
    return "no_information";
  }
  return "?";
}

std::string_view toString(Strategy s) {
  switch (s) {
  case Strategy::Reference:
    return "reference";
  case Strategy::Proportional:
    return "proportional";
  case Strategy::CompilationFlow:
    return "flow";
  case Strategy::RandomStimuli:
    return "stimuli";
  }
  return "?";
}

Strategy parseStrategy(std::string_view name) {
  if (name == "reference") {
    return Strategy::Reference;
  }
  if (name == "proportional") {
    return Strategy::Proportional;
  }
  if (name == "flow" || name == "compilation_flow") {
    return Strategy::CompilationFlow;
  }
  if (name == "stimuli" || name == "random_stimuli") {
    return Strategy::RandomStimuli;
  }
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

// --- cost table ----------------------------------------------------------------

CostTable CostTable::defaults() {
  using qc::OpType;
  CostTable t;
  for (const auto k : {OpType::I, OpType::X, OpType::Y, OpType::Z, OpType::H, OpType::S, OpType::Sdg, OpType::T,
                       OpType::Tdg, OpType::P, OpType::RX, OpType::RY, OpType::RZ, OpType::U2, OpType::U3}) {
    t.set(k, 0, 1);
  }
  t.set(OpType::SWAP, 0, 3);
  t.set(OpType::X, 1, 1);
  for (const auto k : {OpType::P, OpType::S, OpType::Sdg, OpType::T, OpType::Tdg}) {
    t.set(k, 1, 5);
  }
  t.set(OpType::X, 2, 15);
  return t;
}

void CostTable::set(qc::OpType type, std::size_t controls, std::size_t cost) {
  if (cost == 0) {
    throw std::invalid_argument("costs must be at least 1");
  }
  costs_[{type, controls}] = cost;
}

bool CostTable::contains(const qc::Operation& op) const { return costs_.contains({op.type, op.controls.size()}); }

std::size_t CostTable::cost(const qc::Operation& op) const {
  const auto it = costs_.find({op.type, op.controls.size()});
  if (it == costs_.end()) {
    throw MissingCostError("no cost for " + std::string(op.controls.size(), 'c') + std::string(qc::toString(op.type)));
  }
  return it->second;
}

// --- schedules -------------------------------------------------------------------

Ratio proportionalSchedule(std::size_t n1, std::size_t n2) {
  if (n1 == 0 || n2 == 0) {
    return {1, 1};
  }
  return {std::max<std::size_t>(1, n1 / n2), std::max<std::size_t>(1, n2 / n1)};
}

std::vector<std::size_t> compilationFlowSchedule(const qc::QuantumCircuit& c1, const CostTable& costs) {
  std::vector<std::size_t> budget;
  for (const auto& op : c1) {
    if (op.type != qc::OpType::Barrier) {
      budget.push_back(costs.cost(op));
    }
  }
  return budget;
}

bool isIdentity(dd::Package& p, const dd::MatrixDD& u, bool upToGlobalPhase, double tolerance) {
  if (u.numQubits == 0) {
    return false;
  }
  const auto id = p.identity(u.numQubits);
  if (u.root.node != id.root.node) {
    return false;
  }
  const auto w = u.root.w.value();
  if (upToGlobalPhase) {
    return std::abs(std::abs(w) - 1.) <= tolerance;
  }
  return std::abs(w - 1.) <= tolerance;
}

std::vector<std::string> randomBasisStimuli(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::string> out;
  const bool dedup = n >= 63 || (std::uint64_t{1} << n) >= k;
  std::unordered_set<std::string> seen;
  while (out.size() < k) {
    std::string bits(n, '0');
    for (auto& b : bits) {
      b = (rng() & 1U) != 0 ? '1' : '0';
    }
    if (dedup && !seen.insert(bits).second) {
      continue;
    }
    out.push_back(std::move(bits));
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

/// Accumulator for the alternating strategies.
class Alternating {
public:
  Alternating(dd::Package& p, std::size_t n) : p_(p), n_(n), u_(p.identity(n)) {
    dd::Package::incRef(u_);
    peak_ = dd::Package::nodeCount(u_);
  }

  void left(const qc::Operation& op) { replace(p_.multiply(sim::gateDD(p_, op, n_), u_)); }
  void right(const qc::Operation& op) {
    replace(p_.multiply(u_, p_.conjugateTranspose(sim::gateDD(p_, op, n_))));
  }

  [[nodiscard]] const dd::MatrixDD& result() const { return u_; }
  [[nodiscard]] std::size_t peak() const { return peak_; }

private:
  void replace(const dd::MatrixDD& next) {
    dd::Package::incRef(next);
    dd::Package::decRef(u_);
    u_ = next;
    peak_ = std::max(peak_, dd::Package::nodeCount(u_));
    p_.garbageCollect();
  }

  dd::Package& p_;
  std::size_t n_;
  dd::MatrixDD u_;
  std::size_t peak_ = 0;
};

std::vector<const qc::Operation*> gates(const qc::QuantumCircuit& c) {
  std::vector<const qc::Operation*> g;
  for (const auto& op : c) {
    if (op.type != qc::OpType::Barrier) {
      g.push_back(&op);
    }
  }
  return g;
}

Verdict classify(dd::Package& p, const dd::MatrixDD& u, double tolerance) {
  if (isIdentity(p, u, false, tolerance)) {
    return Verdict::Equivalent;
  }
  if (isIdentity(p, u, true, tolerance)) {
    return Verdict::EquivalentUpToGlobalPhase;
  }
  return Verdict::NotEquivalent;
}

EquivalenceResult checkReference(dd::Package& p, const qc::QuantumCircuit& c1, const qc::QuantumCircuit& c2) {
  EquivalenceResult r;
  const auto f1 = sim::buildFunctionality(p, c1);
  dd::Package::incRef(f1.dd);
  const auto f2 = sim::buildFunctionality(p, c2);
  r.peakNodes = std::max(f1.peakNodes, f2.peakNodes);
  r.gatesApplied = {c1.nops(), c2.nops()};
  const double tol = p.tolerance();
  if (f1.dd.root.node != f2.dd.root.node) {
    r.verdict = Verdict::NotEquivalent;
  } else {
    const auto w1 = f1.dd.root.w.value();
    const auto w2 = f2.dd.root.w.value();
    if (std::abs(w1 - w2) <= tol) {
      r.verdict = Verdict::Equivalent;
    } else if (std::abs(std::abs(w1) - std::abs(w2)) <= tol) {
      r.verdict = Verdict::EquivalentUpToGlobalPhase;
    } else {
      r.verdict = Verdict::NotEquivalent;
    }
  }
  dd::Package::decRef(f1.dd);
  return r;
}

EquivalenceResult checkProportional(dd::Package& p, const qc::QuantumCircuit& c1, const qc::QuantumCircuit& c2) {
  const auto g1 = gates(c1);
  const auto g2 = gates(c2);
  const auto ratio = proportionalSchedule(g1.size(), g2.size());
  Alternating acc(p, c1.numQubits());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < g1.size() && j < g2.size()) {
    for (std::size_t k = 0; k < ratio.left && i < g1.size(); ++k) {
      acc.left(*g1[i++]);
    }
    for (std::size_t k = 0; k < ratio.right && j < g2.size(); ++k) {
      acc.right(*g2[j++]);
    }
  }
  for (; i < g1.size(); ++i) {
    acc.left(*g1[i]);
  }
  for (; j < g2.size(); ++j) {
    acc.right(*g2[j]);
  }
  EquivalenceResult r;
  r.verdict = classify(p, acc.result(), p.tolerance());
  r.peakNodes = acc.peak();
  r.gatesApplied = {i, j};
  return r;
}

EquivalenceResult checkCompilationFlow(dd::Package& p, const qc::QuantumCircuit& c1, const qc::QuantumCircuit& c2,
                                       const CostTable& costs) {
  const auto budget = compilationFlowSchedule(c1, costs);
  const auto g1 = gates(c1);
  const auto g2 = gates(c2);
  Alternating acc(p, c1.numQubits());
  std::size_t j = 0;
  for (std::size_t i = 0; i < g1.size(); ++i) {
    acc.left(*g1[i]);
    for (std::size_t k = 0; k < budget[i] && j < g2.size(); ++k) {
      acc.right(*g2[j++]);
    }
  }
  for (; j < g2.size(); ++j) {
    acc.right(*g2[j]);
  }
  EquivalenceResult r;
  r.verdict = classify(p, acc.result(), p.tolerance());
  r.peakNodes = acc.peak();
  r.gatesApplied = {g1.size(), j};
  return r;
}

dd::VectorDD simulateOn(dd::Package& p, const qc::QuantumCircuit& c, const std::string& bits, std::size_t& peak) {
  auto v = p.basisState(c.numQubits(), bits);
  dd::Package::incRef(v);
  peak = std::max(peak, dd::Package::nodeCount(v));
  for (const auto& op : c) {
    if (op.type == qc::OpType::Barrier) {
      continue;
    }
    const auto next = p.multiply(sim::gateDD(p, op, c.numQubits()), v);
    dd::Package::incRef(next);
    dd::Package::decRef(v);
    v = next;
    peak = std::max(peak, dd::Package::nodeCount(v));
    p.garbageCollect();
  }
  return v;
}

EquivalenceResult checkStimuli(dd::Package& p, const qc::QuantumCircuit& c1, const qc::QuantumCircuit& c2,
                               const Configuration& config) {
  if (config.stimuli == 0) {
    throw std::invalid_argument("random stimuli need k >= 1");
  }
  std::mt19937_64 rng(config.seed);
  const auto stimuli = randomBasisStimuli(c1.numQubits(), config.stimuli, rng);
  EquivalenceResult r;
  r.verdict = Verdict::ProbablyEquivalent;
  for (const auto& bits : stimuli) {
    const auto v1 = simulateOn(p, c1, bits, r.peakNodes);
    const auto v2 = simulateOn(p, c2, bits, r.peakNodes);
    r.gatesApplied.first += c1.nops();
    r.gatesApplied.second += c2.nops();
    const double fidelity = std::norm(p.innerProduct(v1, v2));
    dd::Package::decRef(v1);
    dd::Package::decRef(v2);
    if (std::abs(1. - fidelity) > 1e-9) {
      r.verdict = Verdict::NotEquivalent;
      break;
    }
  }
  return r;
}

void requireCheckable(const qc::QuantumCircuit& c1, const qc::QuantumCircuit& c2) {
  if (c1.numQubits() != c2.numQubits()) {
    throw QubitCountMismatchError("circuits act on " + std::to_string(c1.numQubits()) + " and " +
                                  std::to_string(c2.numQubits()) + " qubits");
  }
  if (!c1.isUnitary() || !c2.isUnitary()) {
    throw qc::NotInvertibleError("measure, reset and classically controlled operations cannot be verified");
  }
  if (c1.numQubits() == 0) {
    throw std::invalid_argument("circuits have no qubits");
  }
}

} // namespace

EquivalenceResult check(const qc::QuantumCircuit& c1, const qc::QuantumCircuit& c2, const Configuration& config) {
  requireCheckable(c1, c2);
  if (config.strategy == Strategy::CompilationFlow) {
    compilationFlowSchedule(c1, config.costs);
  }
  const auto start = Clock::now();
  dd::Package p(config.engine);
  EquivalenceResult r;
  switch (config.strategy) {
  case Strategy::Reference:
    r = checkReference(p, c1, c2);
    break;
  case Strategy::Proportional:
    r = checkProportional(p, c1, c2);
    break;
  case Strategy::CompilationFlow:
    r = checkCompilationFlow(p, c1, c2, config.costs);
    break;
  case Strategy::RandomStimuli:
    r = checkStimuli(p, c1, c2, config);
    break;
  }
  if (config.foldGlobalPhase && r.verdict == Verdict::EquivalentUpToGlobalPhase) {
    r.verdict = Verdict::Equivalent;
  }
  r.strategy = config.strategy;
  r.elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

// --- step-wise verification ---------------------------------------------------------

VerificationRun::VerificationRun(qc::QuantumCircuit left, qc::QuantumCircuit right, const dd::EngineConfig& config)
    : circuits_{std::move(left), std::move(right)}, package_(std::make_unique<dd::Package>(config)) {
  requireCheckable(circuits_[0], circuits_[1]);
  acc_ = package_->identity(circuits_[0].numQubits());
  dd::Package::incRef(acc_);
  peakNodes_ = dd::Package::nodeCount(acc_);
}

bool VerificationRun::exhausted(Side side) const {
  const auto& c = circuits_[index(side)];
  for (auto i = cursors_[index(side)]; i < c.size(); ++i) {
    if (c[i].type != qc::OpType::Barrier) {
      return false;
    }
  }
  return true;
}

void VerificationRun::apply(Side side, const qc::Operation& op, bool undo) {
  auto& p = *package_;
  const auto n = circuits_[0].numQubits();
  auto g = sim::gateDD(p, op, n);
  dd::MatrixDD next;
  // left: U <- g U, undone by g^dagger U; right: U <- U g^dagger, undone by U g
  if (side == Side::Left) {
    next = p.multiply(undo ? p.conjugateTranspose(g) : g, acc_);
  } else {
    next = p.multiply(acc_, undo ? g : p.conjugateTranspose(g));
  }
  dd::Package::incRef(next);
  dd::Package::decRef(acc_);
  acc_ = next;
  peakNodes_ = std::max(peakNodes_, dd::Package::nodeCount(acc_));
  p.garbageCollect();
}

bool VerificationRun::forward(Side side) {
  const auto s = index(side);
  const auto& c = circuits_[s];
  auto& cur = cursors_[s];
  while (cur < c.size() && c[cur].type == qc::OpType::Barrier) {
    ++cur;
  }
  if (cur >= c.size()) {
    return false;
  }
  apply(side, c[cur], false);
  history_[s].push_back(cur);
  ++cur;
  return true;
}

bool VerificationRun::backward(Side side) {
  const auto s = index(side);
  if (history_[s].empty()) {
    cursors_[s] = 0;
    return false;
  }
  const auto idx = history_[s].back();
  history_[s].pop_back();
  apply(side, circuits_[s][idx], true);
  cursors_[s] = idx;
  return true;
}

std::size_t VerificationRun::toBreakpoint(Side side) {
  const auto s = index(side);
  const auto& c = circuits_[s];
  auto& cur = cursors_[s];
  std::size_t applied = 0;
  while (cur < c.size()) {
    if (c[cur].type == qc::OpType::Barrier) {
      ++cur;
      if (applied > 0) {
        break;
      }
      continue;
    }
    forward(side);
    ++applied;
  }
  return applied;
}

std::size_t VerificationRun::toEnd(Side side) {
  std::size_t applied = 0;
  while (forward(side)) {
    ++applied;
  }
  return applied;
}

void VerificationRun::toStart(Side side) {
  while (backward(side)) {
  }
}

bool VerificationRun::isIdentity(bool upToGlobalPhase) const {
  return ec::isIdentity(*package_, acc_, upToGlobalPhase, package_->tolerance());
}

} // namespace ec
