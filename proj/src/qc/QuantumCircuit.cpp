#include "qc/QuantumCircuit.hpp"

#include <algorithm>
#include <numbers>
#include <string>
#include <unordered_set>

namespace qc {

QuantumCircuit::QuantumCircuit(std::size_t qubits, std::size_t clbits, std::string circuitName)
    : name(std::move(circuitName)) {
  if (qubits > 0) {
    addQubitRegister("q", qubits);
  }
  if (clbits > 0) {
    addClassicalRegister("c", clbits);
  }
}

std::size_t QuantumCircuit::nops() const {
  return static_cast<std::size_t>(
      std::count_if(ops_.begin(), ops_.end(), [](const Operation& op) { return op.type != OpType::Barrier; }));
}

bool QuantumCircuit::isUnitary() const {
  return std::all_of(ops_.begin(), ops_.end(),
                     [](const Operation& op) { return op.type == OpType::Barrier || op.isUnitary(); });
}

const Register& QuantumCircuit::addQubitRegister(std::string regName, std::size_t regSize) {
  qregs_.push_back({std::move(regName), numQubits_, regSize});
  numQubits_ += regSize;
  return qregs_.back();
}

const Register& QuantumCircuit::addClassicalRegister(std::string regName, std::size_t regSize) {
  cregs_.push_back({std::move(regName), numClbits_, regSize});
  numClbits_ += regSize;
  return cregs_.back();
}

void QuantumCircuit::append(Operation op) {
  const auto checkQubit = [this](Qubit q) {
    if (q < 0 || static_cast<std::size_t>(q) >= numQubits_) {
      throw CircuitError("qubit index " + std::to_string(q) + " out of range");
    }
  };
  const auto name = std::string(toString(op.type));

  if (op.type == OpType::Barrier) {
    if (!op.controls.empty() || !op.params.empty() || !op.clbits.empty() || op.condition) {
      throw CircuitError("barrier takes no controls, parameters or condition");
    }
    std::for_each(op.targets.begin(), op.targets.end(), checkQubit);
    ops_.push_back(std::move(op));
    return;
  }
  if (op.targets.size() != numTargets(op.type)) {
    throw CircuitError(name + " expects " + std::to_string(numTargets(op.type)) + " target(s)");
  }
  if (op.params.size() != numParams(op.type)) {
    throw CircuitError(name + " expects " + std::to_string(numParams(op.type)) + " parameter(s)");
  }
  std::unordered_set<Qubit> seen;
  for (const auto q : op.targets) {
    checkQubit(q);
    seen.insert(q);
  }
  for (const auto q : op.controls) {
    checkQubit(q);
    if (!seen.insert(q).second) {
      throw CircuitError(name + " uses qubit " + std::to_string(q) + " more than once");
    }
  }
  if (seen.size() != op.targets.size() + op.controls.size()) {
    throw CircuitError(name + " targets must be distinct");
  }
  if (op.type == OpType::Measure) {
    if (op.clbits.size() != 1 || op.clbits[0] >= numClbits_) {
      throw CircuitError("measure needs one classical bit in range");
    }
  } else if (!op.clbits.empty()) {
    throw CircuitError(name + " takes no classical bits");
  }
  if (!op.isGate() && !op.controls.empty()) {
    throw CircuitError(name + " cannot be controlled");
  }
  if (op.condition) {
    if (!op.isGate()) {
      throw CircuitError("classical conditions are only allowed on gates");
    }
    const auto& cond = *op.condition;
    if (cond.width == 0 || cond.start + cond.width > numClbits_) {
      throw CircuitError("classical condition out of range");
    }
    if (cond.width < 64 && cond.value >> cond.width != 0) {
      throw CircuitError("classical condition value does not fit its register");
    }
  }
  ops_.push_back(std::move(op));
}

void QuantumCircuit::gate(OpType type, std::vector<Qubit> targets, std::vector<Qubit> controls,
                          std::vector<double> params) {
  Operation op;
  op.type = type;
  op.targets = std::move(targets);
  op.controls = std::move(controls);
  op.params = std::move(params);
  append(std::move(op));
}

void QuantumCircuit::measure(Qubit q, Clbit c) {
  Operation op;
  op.type = OpType::Measure;
  op.targets = {q};
  op.clbits = {c};
  append(std::move(op));
}

void QuantumCircuit::reset(Qubit q) {
  Operation op;
  op.type = OpType::Reset;
  op.targets = {q};
  append(std::move(op));
}

void QuantumCircuit::barrier() {
  Operation op;
  op.type = OpType::Barrier;
  for (std::size_t q = 0; q < numQubits_; ++q) {
    op.targets.push_back(static_cast<Qubit>(q));
  }
  append(std::move(op));
}

bool structurallyEqual(const QuantumCircuit& a, const QuantumCircuit& b, double tolerance) {
  if (a.numQubits() != b.numQubits() || a.numClbits() != b.numClbits() || a.size() != b.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].equivalentTo(b[i], tolerance)) {
      return false;
    }
  }
  return true;
}

Operation inverse(const Operation& op) {
  if (op.type == OpType::Barrier) {
    return op;
  }
  if (!op.isUnitary()) {
    throw NotInvertibleError(std::string(toString(op.type)) + " is not invertible");
  }
  Operation inv = op;
  constexpr double pi = std::numbers::pi;
  switch (op.type) {
  case OpType::S:
    inv.type = OpType::Sdg;
    break;
  case OpType::Sdg:
    inv.type = OpType::S;
    break;
  case OpType::T:
    inv.type = OpType::Tdg;
    break;
  case OpType::Tdg:
    inv.type = OpType::T;
    break;
  case OpType::P:
  case OpType::RX:
  case OpType::RY:
  case OpType::RZ:
    inv.params[0] = -op.params[0];
    break;
  case OpType::U2:
    // U2(phi, lambda)^dagger = U2(-lambda - pi, pi - phi)
    inv.params = {-op.params[1] - pi, pi - op.params[0]};
    break;
  case OpType::U3:
    inv.params = {-op.params[0], -op.params[2], -op.params[1]};
    break;
  default:
    break;
  }
  return inv;
}

QuantumCircuit invert(const QuantumCircuit& c) {
  QuantumCircuit out;
  out.name = c.name.empty() ? std::string{} : c.name + "_inv";
  for (const auto& r : c.qregs()) {
    out.addQubitRegister(r.name, r.size);
  }
  for (const auto& r : c.cregs()) {
    out.addClassicalRegister(r.name, r.size);
  }
  for (auto it = c.ops().rbegin(); it != c.ops().rend(); ++it) {
    out.append(inverse(*it));
  }
  return out;
}

} // namespace qc
