#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace qc {

using Qubit = std::int32_t;
using Clbit = std::size_t;

enum class OpType : std::uint8_t {
  I,
  X,
  Y,
  Z,
  H,
  S,
  Sdg,
  T,
  Tdg,
  P,
  RX,
  RY,
  RZ,
  U2,
  U3,
  SWAP,
  Measure,
  Reset,
  Barrier,
};

/// Lower-case OpenQASM mnemonic without control prefixes ("p", "u3", ...).
std::string_view toString(OpType t);
/// Number of angle parameters the kind takes.
std::size_t numParams(OpType t);
/// Number of target qubits (2 for SWAP, 1 for other gates, 0 for barrier).
std::size_t numTargets(OpType t);
bool isGate(OpType t);

/// `if (creg == value)` guard. The register covers clbits
/// [start, start + width), the first one being the least significant bit.
struct ClassicalCondition {
  Clbit start = 0;
  std::size_t width = 0;
  std::uint64_t value = 0;
  friend bool operator==(const ClassicalCondition&, const ClassicalCondition&) = default;
};

struct Operation {
  OpType type = OpType::I;
  std::vector<double> params;
  /// Positive controls, in source order.
  std::vector<Qubit> controls;
  std::vector<Qubit> targets;
  /// Measure only: the clbit receiving the outcome of targets[0].
  std::vector<Clbit> clbits;
  std::optional<ClassicalCondition> condition;

  [[nodiscard]] bool isGate() const { return qc::isGate(type); }
  /// Gates without a classical condition.
  [[nodiscard]] bool isUnitary() const { return isGate() && !condition; }

  /// Same kind, qubits, clbits and condition; angles are compared modulo
  /// the period of the gate matrix in that parameter.
  [[nodiscard]] bool equivalentTo(const Operation& other, double tolerance = 1e-12) const;
};

/// Period of `type`'s matrix in parameter `index`: 2*pi for phase-like
/// angles, 4*pi for rotation angles that enter as theta/2.
double parameterPeriod(OpType type, std::size_t index);

} // namespace qc
