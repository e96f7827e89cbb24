#pragma once

#include "qc/Operation.hpp"

#include <complex>
#include <span>
#include <vector>

namespace qc {

using Complex = std::complex<double>;

/// Row-major 2x2 matrix of a single-target gate kind (no controls).
/// Throws std::invalid_argument on arity mismatch or non-single-qubit kinds.
std::vector<Complex> singleQubitMatrix(OpType type, std::span<const double> params);

/// Base matrix of a gate kind: 2x2 for single-qubit kinds, 4x4 for SWAP.
/// Row-major; for SWAP the first target is the less significant qubit.
std::vector<Complex> gateBaseMatrix(OpType type, std::span<const double> params);

} // namespace qc
