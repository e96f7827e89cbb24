#pragma once

#include "qc/Operation.hpp"

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace qc {

/// Raised when an operation does not fit the circuit it is added to.
class CircuitError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class NotInvertibleError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct Register {
  std::string name;
  std::size_t start = 0;
  std::size_t size = 0;
};

/// Ordered list of operations over `numQubits` qubits and `numClbits`
/// classical bits. Registers are flattened in declaration order, so the
/// first declared register holds the least significant qubits.
class QuantumCircuit {
public:
  QuantumCircuit() = default;
  /// Creates registers "q" and (if `clbits` > 0) "c".
  explicit QuantumCircuit(std::size_t qubits, std::size_t clbits = 0, std::string name = {});

  std::string name;

  [[nodiscard]] std::size_t numQubits() const { return numQubits_; }
  [[nodiscard]] std::size_t numClbits() const { return numClbits_; }
  [[nodiscard]] const std::vector<Register>& qregs() const { return qregs_; }
  [[nodiscard]] const std::vector<Register>& cregs() const { return cregs_; }
  [[nodiscard]] const std::vector<Operation>& ops() const { return ops_; }
  [[nodiscard]] const Operation& operator[](std::size_t i) const { return ops_[i]; }
  [[nodiscard]] std::size_t size() const { return ops_.size(); }
  [[nodiscard]] bool empty() const { return ops_.empty(); }
  [[nodiscard]] auto begin() const { return ops_.begin(); }
  [[nodiscard]] auto end() const { return ops_.end(); }

  /// Operations other than barriers.
  [[nodiscard]] std::size_t nops() const;
  /// True if every operation is an unconditioned gate or a barrier.
  [[nodiscard]] bool isUnitary() const;

  const Register& addQubitRegister(std::string regName, std::size_t regSize);
  const Register& addClassicalRegister(std::string regName, std::size_t regSize);

  /// Validates index ranges, arities and distinctness; throws CircuitError.
  void append(Operation op);

  void gate(OpType type, std::vector<Qubit> targets, std::vector<Qubit> controls = {},
            std::vector<double> params = {});
  void i(Qubit q) { gate(OpType::I, {q}); }
  void x(Qubit q, std::vector<Qubit> controls = {}) { gate(OpType::X, {q}, std::move(controls)); }
  void y(Qubit q) { gate(OpType::Y, {q}); }
  void z(Qubit q, std::vector<Qubit> controls = {}) { gate(OpType::Z, {q}, std::move(controls)); }
  void h(Qubit q) { gate(OpType::H, {q}); }
  void s(Qubit q) { gate(OpType::S, {q}); }
  void t(Qubit q) { gate(OpType::T, {q}); }
  void p(double theta, Qubit q, std::vector<Qubit> controls = {}) {
    gate(OpType::P, {q}, std::move(controls), {theta});
  }
  void cx(Qubit control, Qubit target) { gate(OpType::X, {target}, {control}); }
  void swap(Qubit a, Qubit b) { gate(OpType::SWAP, {a, b}); }
  void measure(Qubit q, Clbit c);
  void reset(Qubit q);
  void barrier();

private:
  std::size_t numQubits_ = 0;
  std::size_t numClbits_ = 0;
  std::vector<Register> qregs_;
  std::vector<Register> cregs_;
  std::vector<Operation> ops_;
};

/// Same qubit/clbit counts and pairwise equivalent operations. Names and
/// register layout are ignored.
bool structurallyEqual(const QuantumCircuit& a, const QuantumCircuit& b, double tolerance = 1e-12);

/// Reverses the gate order and replaces every gate by its adjoint. Barriers
/// are kept at their mirrored positions. Throws NotInvertibleError on
/// measure, reset or classically controlled operations.
QuantumCircuit invert(const QuantumCircuit& c);

/// Adjoint of a single gate operation.
Operation inverse(const Operation& op);

} // namespace qc
