#include "sim/GateDD.hpp"

#include "qc/Gates.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace sim {

dd::MatrixDD gateDD(dd::Package& p, const qc::Operation& op, std::size_t numQubits) {
  if (!op.isGate()) {
    throw std::invalid_argument("only gates have a matrix");
  }
  const std::vector<dd::Qubit> controls(op.controls.begin(), op.controls.end());
  if (op.type == qc::OpType::SWAP) {
    return p.makeSwapDD(numQubits, controls, op.targets[0], op.targets[1]);
  }
  if (op.type == qc::OpType::I) {
    return p.identity(numQubits);
  }
  const auto m = qc::singleQubitMatrix(op.type, op.params);
  dd::GateMatrix g{};
  std::copy(m.begin(), m.end(), g.begin());
  return p.makeGateDD(g, numQubits, controls, op.targets[0]);
}

Functionality buildFunctionality(dd::Package& p, const qc::QuantumCircuit& c) {
  if (!c.isUnitary()) {
    throw qc::NotInvertibleError("circuit contains non-unitary operations");
  }
  Functionality f{p.identity(c.numQubits()), 0};
  dd::Package::incRef(f.dd);
  f.peakNodes = dd::Package::nodeCount(f.dd);
  for (const auto& op : c) {
    if (op.type == qc::OpType::Barrier) {
      continue;
    }
    const auto next = p.multiply(gateDD(p, op, c.numQubits()), f.dd);
    dd::Package::incRef(next);
    dd::Package::decRef(f.dd);
    f.dd = next;
    f.peakNodes = std::max(f.peakNodes, dd::Package::nodeCount(f.dd));
    p.garbageCollect();
  }
  dd::Package::decRef(f.dd);
  return f;
}

} // namespace sim
