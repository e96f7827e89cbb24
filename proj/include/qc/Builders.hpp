#pragma once

#include "qc/QuantumCircuit.hpp"

#include <cstddef>
#include <optional>
#include <string_view>

namespace qc {

/// n-qubit QFT: H on the most significant qubit first, then controlled
/// phases, then (optionally) the qubit-reversal swaps.
QuantumCircuit buildQft(std::size_t n, bool includeFinalSwaps = true);

/// Default Grover iteration count, floor(pi/4 * sqrt(2^n)) and at least 1.
std::size_t groverIterations(std::size_t nSearch);

/// Grover search over `nSearch` qubits for `target` (written q_{n-1}..q_0).
/// Qubit nSearch is a flag prepared in |->; the oracle is a multi-controlled
/// X onto it with X gates selecting the zero bits of `target`.
QuantumCircuit buildGrover(std::size_t nSearch, std::string_view target,
                           std::optional<std::size_t> iterations = std::nullopt);

} // namespace qc
