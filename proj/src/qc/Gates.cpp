#include "qc/Gates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qc {

namespace {

std::vector<Complex> u3(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  return {c, -std::polar(1., lambda) * s, std::polar(1., phi) * s, std::polar(1., phi + lambda) * c};
}

} // namespace

std::vector<Complex> singleQubitMatrix(OpType type, std::span<const double> params) {
  if (params.size() != numParams(type)) {
    throw std::invalid_argument(std::string(toString(type)) + " expects " + std::to_string(numParams(type)) +
                                " parameter(s), got " + std::to_string(params.size()));
  }
  constexpr double r = 1. / std::numbers::sqrt2;
  const Complex i{0., 1.};
  switch (type) {
  case OpType::I:
    return {1., 0., 0., 1.};
  case OpType::X:
    return {0., 1., 1., 0.};
  case OpType::Y:
    return {0., -i, i, 0.};
  case OpType::Z:
    return {1., 0., 0., -1.};
  case OpType::H:
    return {r, r, r, -r};
  case OpType::S:
    return {1., 0., 0., i};
  case OpType::Sdg:
    return {1., 0., 0., -i};
  case OpType::T:
    return {1., 0., 0., Complex{r, r}};
  case OpType::Tdg:
    return {1., 0., 0., Complex{r, -r}};
  case OpType::P:
    return {1., 0., 0., std::polar(1., params[0])};
  case OpType::RX: {
    const double c = std::cos(params[0] / 2);
    const double s = std::sin(params[0] / 2);
    return {c, -i * s, -i * s, c};
  }
  case OpType::RY: {
    const double c = std::cos(params[0] / 2);
    const double s = std::sin(params[0] / 2);
    return {c, -s, s, c};
  }
  case OpType::RZ:
    return {std::polar(1., -params[0] / 2), 0., 0., std::polar(1., params[0] / 2)};
  case OpType::U2:
    return u3(std::numbers::pi / 2, params[0], params[1]);
  case OpType::U3:
    return u3(params[0], params[1], params[2]);
  default:
    throw std::invalid_argument(std::string(toString(type)) + " is not a single-qubit gate");
  }
}

std::vector<Complex> gateBaseMatrix(OpType type, std::span<const double> params) {
  if (type != OpType::SWAP) {
    return singleQubitMatrix(type, params);
  }
  if (!params.empty()) {
    throw std::invalid_argument("swap takes no parameters");
  }
  std::vector<Complex> m(16);
  m[0] = m[1 * 4 + 2] = m[2 * 4 + 1] = m[15] = 1.;
  return m;
}

} // namespace qc
