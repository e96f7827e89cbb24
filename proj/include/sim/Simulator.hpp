#pragma once

#include "dd/Package.hpp"
#include "qc/QuantumCircuit.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace sim {

enum class StepStatus : std::uint8_t { Advanced, NeedsDecision, Finished };

struct PendingDecision {
  enum class Kind : std::uint8_t { Measure, Reset };
  Kind kind = Kind::Measure;
  qc::Qubit qubit = 0;
  double p0 = 0.;
  double p1 = 0.;
};

struct StepOutcome {
  StepStatus status = StepStatus::Advanced;
  std::optional<PendingDecision> decision;
};

enum class RunTarget : std::uint8_t { NextBreakpoint, End };

struct Telemetry {
  std::size_t maxNodes = 0;
  std::size_t appliedGates = 0;
  double simulationTime = 0.;
};

class NoPendingDecisionError : public std::logic_error {
public:
  NoPendingDecisionError() : std::logic_error("no decision is pending") {}
};

/// Step-wise simulation of one circuit starting from |0...0>. Owns its own
/// decision diagram package.
///
/// Measure and reset on a qubit that is in superposition stop the run with
/// a pending decision; the operation executes once the decision is resolved.
class SimulationRun {
public:
  explicit SimulationRun(qc::QuantumCircuit circuit, const dd::EngineConfig& config = {});
  ~SimulationRun();

  SimulationRun(const SimulationRun&) = delete;
  SimulationRun& operator=(const SimulationRun&) = delete;

  StepOutcome step();
  /// Resolves the pending decision with `outcome` (0 or 1).
  void resolveDecision(int outcome);
  /// Resolves the pending decision by drawing from the run's rng.
  int resolveDecisionRandom();
  /// Undoes the previous operation. Unitary gates are undone with their
  /// adjoint; measure/reset restore the snapshot taken before them. A
  /// pending decision is dropped first. No-op at the start.
  void stepBackward();
  StepOutcome runTo(RunTarget target);
  /// Rewinds to |0...0> with cleared classical bits.
  void restart();
  /// Runs to the end, resolving every decision with the rng.
  void runToCompletion();

  [[nodiscard]] const qc::QuantumCircuit& circuit() const { return circuit_; }
  [[nodiscard]] const dd::VectorDD& state() const { return state_; }
  [[nodiscard]] std::size_t pc() const { return pc_; }
  [[nodiscard]] bool finished() const { return pc_ >= circuit_.size() && !pending_; }
  [[nodiscard]] const std::optional<PendingDecision>& pending() const { return pending_; }
  [[nodiscard]] const std::vector<bool>& clbits() const { return clbits_; }
  [[nodiscard]] const Telemetry& telemetry() const { return telemetry_; }
  [[nodiscard]] dd::Package& package() { return *package_; }
  [[nodiscard]] std::mt19937_64& rng() { return rng_; }

private:
  enum class Undo : std::uint8_t { Nothing, Adjoint, Snapshot };
  struct HistoryEntry {
    std::size_t op;
    Undo undo;
    dd::VectorDD before;
    std::vector<bool> clbitsBefore;
  };

  void setState(const dd::VectorDD& next);
  bool conditionHolds(const qc::Operation& op) const;
  void execute(const qc::Operation& op, std::optional<int> outcome);
  void track();

  qc::QuantumCircuit circuit_;
  std::unique_ptr<dd::Package> package_;
  dd::VectorDD state_;
  std::size_t pc_ = 0;
  std::vector<bool> clbits_;
  std::optional<PendingDecision> pending_;
  std::vector<HistoryEntry> history_;
  std::mt19937_64 rng_;
  Telemetry telemetry_;
};

/// Bitstring (q_{n-1}...q_0) -> count.
struct Histogram {
  std::map<std::string, std::size_t> counts;
  std::size_t shots = 0;
};

/// Draws `shots` full measurements by random root-to-terminal walks. The
/// state is left untouched.
Histogram sample(const dd::VectorDD& state, std::size_t shots, std::mt19937_64& rng);

/// Basis states with non-zero amplitude.
std::uint64_t countNonZeroEntries(const dd::VectorDD& state);

} // namespace sim
