#include "sim/Simulator.hpp"

#include "sim/GateDD.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace sim {

namespace {

using Clock = std::chrono::steady_clock;

std::string zeros(std::size_t n) { return std::string(n, '0'); }

} // namespace

SimulationRun::SimulationRun(qc::QuantumCircuit circuit, const dd::EngineConfig& config)
    : circuit_(std::move(circuit)), package_(std::make_unique<dd::Package>(config)),
      clbits_(circuit_.numClbits(), false), rng_(config.seed) {
  if (circuit_.numQubits() == 0) {
    throw std::invalid_argument("circuit has no qubits");
  }
  state_ = package_->basisState(circuit_.numQubits(), zeros(circuit_.numQubits()));
  dd::Package::incRef(state_);
  track();
}

SimulationRun::~SimulationRun() = default;

void SimulationRun::setState(const dd::VectorDD& next) {
  dd::Package::incRef(next);
  dd::Package::decRef(state_);
  state_ = next;
}

void SimulationRun::track() {
  telemetry_.maxNodes = std::max(telemetry_.maxNodes, dd::Package::nodeCount(state_));
}

bool SimulationRun::conditionHolds(const qc::Operation& op) const {
  if (!op.condition) {
    return true;
  }
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < op.condition->width; ++i) {
    if (clbits_[op.condition->start + i]) {
      value |= std::uint64_t{1} << i;
    }
  }
  return value == op.condition->value;
}

void SimulationRun::execute(const qc::Operation& op, std::optional<int> outcome) {
  const auto n = circuit_.numQubits();
  HistoryEntry entry{pc_, Undo::Nothing, {}, {}};
  if (op.isGate()) {
    if (conditionHolds(op)) {
      setState(package_->multiply(gateDD(*package_, op, n), state_));
      entry.undo = Undo::Adjoint;
      ++telemetry_.appliedGates;
    }
  } else if (op.type == qc::OpType::Measure || op.type == qc::OpType::Reset) {
    entry.undo = Undo::Snapshot;
    entry.before = state_;
    entry.clbitsBefore = clbits_;
    dd::Package::incRef(entry.before);
    const auto q = op.targets[0];
    const bool one = outcome.value_or(0) == 1;
    setState(package_->collapse(state_, q, one, op.type == qc::OpType::Reset));
    if (op.type == qc::OpType::Measure) {
      clbits_[op.clbits[0]] = one;
    }
  }
  history_.push_back(std::move(entry));
  ++pc_;
  track();
  package_->garbageCollect();
}

StepOutcome SimulationRun::step() {
  if (pending_) {
    return {StepStatus::NeedsDecision, pending_};
  }
  if (pc_ >= circuit_.size()) {
    return {StepStatus::Finished, std::nullopt};
  }
  const auto start = Clock::now();
  const auto& op = circuit_[pc_];
  StepOutcome result{StepStatus::Advanced, std::nullopt};
  if (op.type == qc::OpType::Measure || op.type == qc::OpType::Reset) {
    const auto q = op.targets[0];
    const auto [w0, w1] = dd::Package::qubitProbabilities(state_, q);
    const double total = w0 + w1;
    const double p0 = w0 / total;
    const double p1 = w1 / total;
    const double eps = package_->tolerance();
    if (p0 > eps && p1 > eps) {
      pending_ = PendingDecision{op.type == qc::OpType::Measure ? PendingDecision::Kind::Measure
                                                                 : PendingDecision::Kind::Reset,
                                 q, p0, p1};
      result = {StepStatus::NeedsDecision, pending_};
    } else {
      execute(op, p1 > eps ? 1 : 0);
    }
  } else {
    execute(op, std::nullopt);
  }
  telemetry_.simulationTime += std::chrono::duration<double>(Clock::now() - start).count();
  if (result.status == StepStatus::Advanced && pc_ >= circuit_.size()) {
    result.status = StepStatus::Finished;
  }
  return result;
}

void SimulationRun::resolveDecision(int outcome) {
  if (!pending_) {
    throw NoPendingDecisionError();
  }
  if (outcome != 0 && outcome != 1) {
    throw std::invalid_argument("outcome must be 0 or 1");
  }
  const double p = outcome == 0 ? pending_->p0 : pending_->p1;
  if (p <= package_->tolerance()) {
    throw std::invalid_argument("outcome has zero probability");
  }
  const auto start = Clock::now();
  pending_.reset();
  execute(circuit_[pc_], outcome);
  telemetry_.simulationTime += std::chrono::duration<double>(Clock::now() - start).count();
}

int SimulationRun::resolveDecisionRandom() {
  if (!pending_) {
    throw NoPendingDecisionError();
  }
  std::uniform_real_distribution<double> uni(0., 1.);
  const int outcome = uni(rng_) < pending_->p0 ? 0 : 1;
  resolveDecision(outcome);
  return outcome;
}

void SimulationRun::stepBackward() {
  pending_.reset();
  if (history_.empty()) {
    return;
  }
  auto entry = std::move(history_.back());
  history_.pop_back();
  switch (entry.undo) {
  case Undo::Nothing:
    break;
  case Undo::Adjoint: {
    const auto& op = circuit_[entry.op];
    const auto adj = package_->conjugateTranspose(gateDD(*package_, op, circuit_.numQubits()));
    setState(package_->multiply(adj, state_));
    break;
  }
  case Undo::Snapshot:
    setState(entry.before);
    dd::Package::decRef(entry.before);
    clbits_ = std::move(entry.clbitsBefore);
    break;
  }
  pc_ = entry.op;
  package_->garbageCollect();
}

StepOutcome SimulationRun::runTo(RunTarget target) {
  while (true) {
    const bool atBarrier = pc_ < circuit_.size() && circuit_[pc_].type == qc::OpType::Barrier;
    const auto out = step();
    if (out.status != StepStatus::Advanced) {
      return out;
    }
    if (target == RunTarget::NextBreakpoint && atBarrier) {
      return out;
    }
  }
}

void SimulationRun::restart() {
  pending_.reset();
  for (auto& e : history_) {
    if (e.undo == Undo::Snapshot) {
      dd::Package::decRef(e.before);
    }
  }
  history_.clear();
  pc_ = 0;
  std::fill(clbits_.begin(), clbits_.end(), false);
  setState(package_->basisState(circuit_.numQubits(), zeros(circuit_.numQubits())));
  package_->garbageCollect();
}

void SimulationRun::runToCompletion() {
  while (true) {
    const auto out = runTo(RunTarget::End);
    if (out.status == StepStatus::Finished) {
      return;
    }
    resolveDecisionRandom();
  }
}

Histogram sample(const dd::VectorDD& state, std::size_t shots, std::mt19937_64& rng) {
  Histogram h;
  h.shots = shots;
  std::uniform_real_distribution<double> uni(0., 1.);
  const auto n = state.numQubits;
  std::string bits(n, '0');
  for (std::size_t s = 0; s < shots; ++s) {
    const dd::vNode* node = state.root.node;
    while (!node->isTerminal()) {
      const double a = std::norm(node->e[0].w.value());
      const double b = std::norm(node->e[1].w.value());
      const std::size_t branch = uni(rng) * (a + b) < a ? 0 : 1;
      bits[n - 1 - static_cast<std::size_t>(node->level)] = branch == 0 ? '0' : '1';
      node = node->e[branch].node;
    }
    ++h.counts[bits];
  }
  return h;
}

std::uint64_t countNonZeroEntries(const dd::VectorDD& state) { return dd::Package::countNonZero(state); }

} // namespace sim
