#pragma once

#include "dd/Package.hpp"
#include "qc/QuantumCircuit.hpp"

namespace sim {

/// Matrix DD of a gate operation on an n-qubit register. Classical
/// conditions are ignored here; callers decide whether the gate applies.
dd::MatrixDD gateDD(dd::Package& p, const qc::Operation& op, std::size_t numQubits);

/// Product of all gates of a unitary circuit (barriers skipped), first gate
/// applied first. Also reports the largest intermediate node count.
struct Functionality {
  dd::MatrixDD dd;
  std::size_t peakNodes = 0;
};
Functionality buildFunctionality(dd::Package& p, const qc::QuantumCircuit& c);

} // namespace sim
