#include "qc/Operation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qc {

std::string_view toString(OpType t) {
  switch (t) {
  case OpType::I:
    return "id";
  case OpType::X:
    return "x";
  case OpType::Y:
    return "y";
  case OpType::Z:
    return "z";
  case OpType::H:
    return "h";
  case OpType::S:
    return "s";
  case OpType::Sdg:
    return "sdg";
  case OpType::T:
    return "t";
  case OpType::Tdg:
    return "tdg";
  case OpType::P:
    return "p";
  case OpType::RX:
    return "rx";
  case OpType::RY:
    return "ry";
  case OpType::RZ:
    return "rz";
  case OpType::U2:
    return "u2";
  case OpType::U3:
    return "u3";
  case OpType::SWAP:
    return "swap";
  case OpType::Measure:
    return "measure";
  case OpType::Reset:
    return "reset";
  case OpType::Barrier:
    return "barrier";
  }
  return "?";
}

std::size_t numParams(OpType t) {
  switch (t) {
  case OpType::P:
  case OpType::RX:
  case OpType::RY:
  case OpType::RZ:
    return 1;
  case OpType::U2:
    return 2;
  case OpType::U3:
    return 3;
  default:
    return 0;
  }
}

std::size_t numTargets(OpType t) {
  switch (t) {
  case OpType::SWAP:
    return 2;
  case OpType::Barrier:
    return 0;
  default:
    return 1;
  }
}

bool isGate(OpType t) { return t != OpType::Measure && t != OpType::Reset && t != OpType::Barrier; }

double parameterPeriod(OpType type, std::size_t index) {
  constexpr double twoPi = 2 * std::numbers::pi;
  switch (type) {
  case OpType::RX:
  case OpType::RY:
  case OpType::RZ:
    return 2 * twoPi;
  case OpType::U3:
    return index == 0 ? 2 * twoPi : twoPi;
  default:
    return twoPi;
  }
}

bool Operation::equivalentTo(const Operation& other, double tolerance) const {
  if (type != other.type || controls != other.controls || targets != other.targets || clbits != other.clbits ||
      condition != other.condition || params.size() != other.params.size()) {
    return false;
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double period = parameterPeriod(type, k);
    double r = std::fmod(params[k] - other.params[k], period);
    if (r < 0) {
      r += period;
    }
    const double scale = std::max({1., std::abs(params[k]), std::abs(other.params[k])});
    if (std::min(r, period - r) > tolerance * scale) {
      return false;
    }
  }
  return true;
}

} // namespace qc
