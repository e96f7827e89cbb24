#include "qc/Builders.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qc {

QuantumCircuit buildQft(std::size_t n, bool includeFinalSwaps) {
  if (n == 0) {
    throw std::invalid_argument("QFT needs at least one qubit");
  }
  QuantumCircuit c(n, 0, "qft" + std::to_string(n));
  for (auto i = static_cast<Qubit>(n) - 1; i >= 0; --i) {
    c.h(i);
    for (auto j = i - 1; j >= 0; --j) {
      c.p(std::numbers::pi / std::ldexp(1., i - j), i, {j});
    }
  }
  if (includeFinalSwaps) {
    for (std::size_t i = 0; i < n / 2; ++i) {
      c.swap(static_cast<Qubit>(i), static_cast<Qubit>(n - 1 - i));
    }
  }
  return c;
}

std::size_t groverIterations(std::size_t nSearch) {
  const auto k = static_cast<std::size_t>(std::floor(std::numbers::pi / 4 * std::sqrt(std::ldexp(1., static_cast<int>(nSearch)))));
  return std::max<std::size_t>(k, 1);
}

QuantumCircuit buildGrover(std::size_t nSearch, std::string_view target, std::optional<std::size_t> iterations) {
  if (nSearch == 0) {
    throw std::invalid_argument("Grover search needs at least one qubit");
  }
  if (target.size() != nSearch) {
    throw std::invalid_argument("target has " + std::to_string(target.size()) + " bits, expected " +
                                std::to_string(nSearch));
  }
  if (target.find_first_not_of("01") != std::string_view::npos) {
    throw std::invalid_argument("target must be a bitstring");
  }
  const auto flag = static_cast<Qubit>(nSearch);
  QuantumCircuit c(nSearch + 1, 0, "grover_" + std::to_string(nSearch));
  std::vector<Qubit> search;
  for (std::size_t q = 0; q < nSearch; ++q) {
    search.push_back(static_cast<Qubit>(q));
  }
  const auto bit = [&](Qubit q) { return target[nSearch - 1 - static_cast<std::size_t>(q)] == '1'; };

  c.x(flag);
  c.h(flag);
  for (const auto q : search) {
    c.h(q);
  }
  const auto rounds = iterations.value_or(groverIterations(nSearch));
  for (std::size_t r = 0; r < rounds; ++r) {
    for (const auto q : search) {
      if (!bit(q)) {
        c.x(q);
      }
    }
    c.x(flag, search);
    for (const auto q : search) {
      if (!bit(q)) {
        c.x(q);
      }
    }

    for (const auto q : search) {
      c.h(q);
      c.x(q);
    }
    c.z(search[0], std::vector<Qubit>(search.begin() + 1, search.end()));
    for (const auto q : search) {
      c.x(q);
      c.h(q);
    }
  }
  return c;
}

} // namespace qc
