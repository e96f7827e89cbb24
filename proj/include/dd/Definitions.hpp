#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>

namespace dd {

/// Floating point type used for all amplitudes and edge weights.
using fp = double;
using ComplexValue = std::complex<fp>;

/// Qubit index. 0 is the least significant qubit; the terminal sits at -1.
using Qubit = std::int32_t;

inline constexpr Qubit TERMINAL_LEVEL = -1;

inline constexpr fp DEFAULT_TOLERANCE = 1e-13;

inline constexpr fp SQRT2_2 = std::numbers::sqrt2 / 2.;
inline constexpr fp PI = std::numbers::pi;

using GateMatrix = std::array<ComplexValue, 4>;

} // namespace dd
