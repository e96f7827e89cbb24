#pragma once

#include "dd/Package.hpp"
#include "qc/QuantumCircuit.hpp"

#include <cstddef>
#include <cstdint>
#include <array>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ec {

enum class Verdict : std::uint8_t {
  Equivalent,
  EquivalentUpToGlobalPhase,
  NotEquivalent,
  ProbablyEquivalent,
  NoInformation,
};

enum class Strategy : std::uint8_t { Reference, Proportional, CompilationFlow, RandomStimuli };

std::string_view toString(Verdict v);
std::string_view toString(Strategy s);
/// Accepts "reference", "proportional", "flow" (or "compilation_flow") and
/// "stimuli" (or "random_stimuli").
Strategy parseStrategy(std::string_view name);

class QubitCountMismatchError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class MissingCostError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Expected number of compiled gates per (gate kind, number of controls).
class CostTable {
public:
  /// Single-qubit gates 1, SWAP 3, CX 1, controlled phase gates
  /// (P, S, Sdg, T, Tdg) 5, Toffoli 15.
  static CostTable defaults();

  void set(qc::OpType type, std::size_t controls, std::size_t cost);
  /// Throws MissingCostError if the operation's kind has no entry.
  [[nodiscard]] std::size_t cost(const qc::Operation& op) const;
  [[nodiscard]] bool contains(const qc::Operation& op) const;

private:
  std::map<std::pair<qc::OpType, std::size_t>, std::size_t> costs_;
};

struct Configuration {
  Strategy strategy = Strategy::Proportional;
  /// Report equivalence up to a global phase as plain equivalence.
  bool foldGlobalPhase = false;
  std::size_t stimuli = 16;
  std::uint64_t seed = 0;
  CostTable costs = CostTable::defaults();
  dd::EngineConfig engine{};
};

struct EquivalenceResult {
  Verdict verdict = Verdict::NoInformation;
  Strategy strategy = Strategy::Reference;
  std::size_t peakNodes = 0;
  std::pair<std::size_t, std::size_t> gatesApplied{0, 0};
  double elapsed = 0.;
};

/// Throws QubitCountMismatchError, qc::NotInvertibleError for circuits with
/// measure/reset/conditions, MissingCostError for an incomplete cost table.
EquivalenceResult check(const qc::QuantumCircuit& c1, const qc::QuantumCircuit& c2, const Configuration& config = {});

struct Ratio {
  std::size_t left = 1;
  std::size_t right = 1;
  friend bool operator==(const Ratio&, const Ratio&) = default;
};
/// Gates taken from each side per round: max(1, n1/n2) and max(1, n2/n1)
/// with integer division.
Ratio proportionalSchedule(std::size_t n1, std::size_t n2);

/// Right-side budget for each non-barrier gate of `c1`, in order.
std::vector<std::size_t> compilationFlowSchedule(const qc::QuantumCircuit& c1, const CostTable& costs);

/// Exact: root node is the identity node and weight is 1 within `tolerance`.
/// Up to global phase: same node and |weight| = 1 within `tolerance`.
bool isIdentity(dd::Package& p, const dd::MatrixDD& u, bool upToGlobalPhase, double tolerance);

/// `k` bitstrings (q_{n-1}...q_0) drawn uniformly, without repetition when
/// 2^n >= k.
std::vector<std::string> randomBasisStimuli(std::size_t n, std::size_t k, std::mt19937_64& rng);

/// Step-wise construction of G1 * G2^dagger starting from the identity:
/// left gates multiply from the left, adjoints of right gates from the
/// right. Barriers are skipped by single steps and act as stop points for
/// `toBreakpoint` on their own side.
class VerificationRun {
public:
  enum class Side : std::uint8_t { Left, Right };

  VerificationRun(qc::QuantumCircuit left, qc::QuantumCircuit right, const dd::EngineConfig& config = {});

  VerificationRun(const VerificationRun&) = delete;
  VerificationRun& operator=(const VerificationRun&) = delete;

  /// Applies the next gate of `side`; false if that side is exhausted.
  bool forward(Side side);
  /// Undoes the most recent gate of `side`; false if none was applied.
  bool backward(Side side);
  /// Applies gates until a barrier of `side` is passed or the side ends.
  std::size_t toBreakpoint(Side side);
  std::size_t toEnd(Side side);
  /// Undoes every gate applied on `side`.
  void toStart(Side side);

  [[nodiscard]] const dd::MatrixDD& accumulator() const { return acc_; }
  [[nodiscard]] std::size_t cursor(Side side) const { return cursors_[index(side)]; }
  [[nodiscard]] std::size_t applied(Side side) const { return history_[index(side)].size(); }
  [[nodiscard]] bool exhausted(Side side) const;
  [[nodiscard]] std::size_t peakNodes() const { return peakNodes_; }
  [[nodiscard]] const qc::QuantumCircuit& circuit(Side side) const { return circuits_[index(side)]; }
  [[nodiscard]] dd::Package& package() { return *package_; }
  [[nodiscard]] bool isIdentity(bool upToGlobalPhase) const;

private:
  static std::size_t index(Side s) { return s == Side::Left ? 0 : 1; }
  void apply(Side side, const qc::Operation& op, bool undo);

  std::array<qc::QuantumCircuit, 2> circuits_;
  std::unique_ptr<dd::Package> package_;
  dd::MatrixDD acc_;
  std::array<std::size_t, 2> cursors_{0, 0};
  std::array<std::vector<std::size_t>, 2> history_;
  std::size_t peakNodes_ = 0;
};

} // namespace ec
