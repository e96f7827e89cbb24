#pragma once

#include "qc/QuantumCircuit.hpp"

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qc {

/// Syntax or semantic error in OpenQASM input, positioned at a 1-based line
/// and column.
class QasmError : public std::runtime_error {
public:
  QasmError(std::size_t line, std::size_t column, const std::string& message);

  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t column() const { return column_; }
  [[nodiscard]] const std::string& message() const { return message_; }

private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

/// Parses the OpenQASM 2.0 subset: qreg/creg, the built-in gate set with any
/// number of `c` control prefixes, barrier, measure, reset and `if`.
/// `gate` and `opaque` definitions are rejected.
QuantumCircuit parseQasm(std::string_view text, std::string name = {});
QuantumCircuit parseQasmFile(const std::filesystem::path& path);

/// Emits text that parseQasm reads back into a structurally equal circuit.
std::string emitQasm(const QuantumCircuit& c);

} // namespace qc
