#include "oracle/CircuitOracle.hpp"
#include "ec/Equivalence.hpp"
#include "qc/Builders.hpp"
#include "qc/Gates.hpp"
#include "qc/Qasm.hpp"

#include <filesystem>
#include <gtest/gtest.h>
#include <numbers>
#include <random>
#include <set>

namespace {

using ec::Strategy;
using ec::Verdict;
using qc::OpType;
using Side = ec::VerificationRun::Side;

const std::filesystem::path FIXTURES{QDD_FIXTURES_DIR};

qc::QuantumCircuit fixture(const char* name) { return qc::parseQasmFile(FIXTURES / name); }

// Costs for every gate kind with up to two controls, for random circuits.
ec::CostTable completeCosts() {
  auto t = ec::CostTable::defaults();
  for (int k = 0; k <= static_cast<int>(OpType::SWAP); ++k) {
    for (std::size_t c = 0; c <= 2; ++c) {
      t.set(static_cast<OpType>(k), c, 1 + 6 * c);
    }
  }
  return t;
}

ec::Configuration with(Strategy s) {
  ec::Configuration cfg;
  cfg.strategy = s;
  cfg.costs = completeCosts();
  return cfg;
}

dd::GateMatrix gateMatrix(OpType type, std::vector<double> params = {}) {
  const auto m = qc::singleQubitMatrix(type, params);
  return {m[0], m[1], m[2], m[3]};
}

constexpr std::array ALL_STRATEGIES{Strategy::Reference, Strategy::Proportional, Strategy::CompilationFlow,
                                    Strategy::RandomStimuli};

// --- the compiled QFT pair --------------------------------------------------------

TEST(QftPair, CompilationFlowStaysSmall) {
  const auto r = ec::check(fixture("qft3.qasm"), fixture("qft3_compiled.qasm"), ec::Configuration{.strategy = Strategy::CompilationFlow});
  EXPECT_EQ(r.verdict, Verdict::Equivalent);
  EXPECT_LE(r.peakNodes, 9U);
  EXPECT_EQ(r.gatesApplied, (std::pair<std::size_t, std::size_t>{7, 21}));
  EXPECT_EQ(r.strategy, Strategy::CompilationFlow);
}

TEST(QftPair, ReferenceBuildsBothFunctionalities) {
  const auto r = ec::check(fixture("qft3.qasm"), fixture("qft3_compiled.qasm"), with(Strategy::Reference));
  EXPECT_EQ(r.verdict, Verdict::Equivalent);
  EXPECT_EQ(r.peakNodes, 21U);
}

TEST(QftPair, ProportionalAndStimuliAgree) {
  const auto left = fixture("qft3.qasm");
  const auto right = fixture("qft3_compiled.qasm");
  const auto prop = ec::check(left, right, with(Strategy::Proportional));
  EXPECT_EQ(prop.verdict, Verdict::Equivalent);
  EXPECT_LE(prop.peakNodes, 21U);
  const auto stim = ec::check(left, right, with(Strategy::RandomStimuli));
  EXPECT_EQ(stim.verdict, Verdict::ProbablyEquivalent);
}

TEST(QftPair, DroppedGateIsDetectedByEveryStrategy) {
  const auto left = fixture("qft3.qasm");
  const auto compiled = fixture("qft3_compiled.qasm");
  qc::QuantumCircuit broken(3);
  bool dropped = false;
  for (const auto& op : compiled) {
    if (!dropped && op.type == OpType::P && op.targets[0] == 0) {
      dropped = true;
      continue;
    }
    broken.append(op);
  }
  for (const auto s : ALL_STRATEGIES) {
    auto cfg = with(s);
    cfg.stimuli = 8;
    EXPECT_EQ(ec::check(left, broken, cfg).verdict, Verdict::NotEquivalent) << ec::toString(s);
  }
}

// --- schedules ------------------------------------------------------------------------

TEST(Schedule, ProportionalRatio) {
  EXPECT_EQ(ec::proportionalSchedule(7, 22), (ec::Ratio{1, 3}));
  EXPECT_EQ(ec::proportionalSchedule(22, 7), (ec::Ratio{3, 1}));
  EXPECT_EQ(ec::proportionalSchedule(10, 10), (ec::Ratio{1, 1}));
  EXPECT_EQ(ec::proportionalSchedule(1, 100), (ec::Ratio{1, 100}));
  EXPECT_EQ(ec::proportionalSchedule(0, 5), (ec::Ratio{1, 1}));
}

TEST(Schedule, CompilationFlowBudgets) {
  const auto budget = ec::compilationFlowSchedule(fixture("qft3.qasm"), ec::CostTable::defaults());
  EXPECT_EQ(budget, (std::vector<std::size_t>{1, 5, 5, 1, 5, 1, 3}));
}

TEST(Schedule, MissingCostThrowsBeforeAnyWork) {
  ec::CostTable costs;
  costs.set(OpType::H, 0, 1);
  costs.set(OpType::P, 1, 5);
  auto cfg = with(Strategy::CompilationFlow);
  cfg.costs = costs;
  EXPECT_THROW(ec::check(fixture("qft3.qasm"), fixture("qft3_compiled.qasm"), cfg), ec::MissingCostError);
  EXPECT_THROW(costs.set(OpType::X, 0, 0), std::invalid_argument);
}

TEST(Schedule, StrategyNames) {
  for (const auto s : ALL_STRATEGIES) {
    EXPECT_EQ(ec::parseStrategy(ec::toString(s)), s);
  }
  EXPECT_EQ(ec::parseStrategy("compilation_flow"), Strategy::CompilationFlow);
  EXPECT_EQ(ec::parseStrategy("random_stimuli"), Strategy::RandomStimuli);
  EXPECT_THROW(ec::parseStrategy("magic"), std::invalid_argument);
}

// --- identity test -----------------------------------------------------------------

TEST(IsIdentity, Examples) {
  dd::Package p;
  const auto id = p.identity(3);
  EXPECT_TRUE(ec::isIdentity(p, id, false, 1e-13));
  const auto phased = p.scale(id, std::polar(1., std::numbers::pi / 7));
  EXPECT_FALSE(ec::isIdentity(p, phased, false, 1e-13));
  EXPECT_TRUE(ec::isIdentity(p, phased, true, 1e-13));
  const auto half = p.scale(id, 0.5);
  EXPECT_FALSE(ec::isIdentity(p, half, true, 1e-13));
  const std::array<qc::Qubit, 0> none{};
  const auto x = p.makeGateDD(gateMatrix(OpType::X), 3, none, 1);
  EXPECT_FALSE(ec::isIdentity(p, x, true, 1e-13));
  const auto z = p.makeGateDD(gateMatrix(OpType::Z), 3, none, 0);
  EXPECT_FALSE(ec::isIdentity(p, z, true, 1e-13));
}

TEST(GlobalPhase, FoldingOption) {
  qc::QuantumCircuit a(1);
  a.z(0);
  qc::QuantumCircuit b(1);
  b.gate(OpType::RZ, {0}, {}, {std::numbers::pi});
  for (const auto s : {Strategy::Reference, Strategy::Proportional, Strategy::CompilationFlow}) {
    auto cfg = with(s);
    EXPECT_EQ(ec::check(a, b, cfg).verdict, Verdict::EquivalentUpToGlobalPhase) << ec::toString(s);
    cfg.foldGlobalPhase = true;
    EXPECT_EQ(ec::check(a, b, cfg).verdict, Verdict::Equivalent) << ec::toString(s);
  }
}

// --- stimuli ------------------------------------------------------------------------

TEST(Stimuli, CoversAllStatesWhenKEqualsDimension) {
  std::mt19937_64 rng(0);
  const auto s = ec::randomBasisStimuli(3, 8, rng);
  EXPECT_EQ(std::set<std::string>(s.begin(), s.end()).size(), 8U);
  for (const auto& b : s) {
    EXPECT_EQ(b.size(), 3U);
  }
  const auto more = ec::randomBasisStimuli(2, 10, rng);
  EXPECT_EQ(more.size(), 10U);
}

TEST(Stimuli, VerdictsAreOneSided) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = oracle::randomCircuit(3, 10, rng);
    auto cfg = with(Strategy::RandomStimuli);
    cfg.seed = static_cast<std::uint64_t>(trial);
    cfg.stimuli = 2;
    // an equivalent pair never produces not_equivalent
    EXPECT_EQ(ec::check(c, c, cfg).verdict, Verdict::ProbablyEquivalent);
    // probably_equivalent is never reported as exactly equivalent
    auto mutated = c;
    mutated.x(0);
    const auto v = ec::check(c, mutated, cfg).verdict;
    EXPECT_TRUE(v == Verdict::NotEquivalent || v == Verdict::ProbablyEquivalent);
  }
}

TEST(Stimuli, ZeroStimuliIsRejected) {
  auto cfg = with(Strategy::RandomStimuli);
  cfg.stimuli = 0;
  const auto c = qc::buildQft(2);
  EXPECT_THROW(ec::check(c, c, cfg), std::invalid_argument);
}

// --- preconditions -----------------------------------------------------------------

TEST(Preconditions, RejectsMismatchAndNonUnitary) {
  EXPECT_THROW(ec::check(qc::buildQft(2), qc::buildQft(3)), ec::QubitCountMismatchError);
  EXPECT_THROW(ec::check(fixture("bell.qasm"), fixture("bell.qasm")), qc::NotInvertibleError);
  EXPECT_THROW(ec::VerificationRun(fixture("bell.qasm"), fixture("bell.qasm")), qc::NotInvertibleError);
}

// --- soundness against the dense oracle ---------------------------------------------

qc::QuantumCircuit mutate(const qc::QuantumCircuit& c, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
  const auto victim = pick(rng);
  qc::QuantumCircuit out(c.numQubits());
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto op = c[i];
    if (i == victim) {
      switch (rng() % 3) {
      case 0:
        continue; // drop
      case 1:
        if (!op.params.empty()) {
          op.params[0] += 0.3;
        } else {
          op = qc::Operation{OpType::H, {}, {}, {op.targets[0]}, {}, std::nullopt};
        }
        break;
      default:
        out.append(qc::Operation{OpType::Y, {}, {}, {op.targets[0]}, {}, std::nullopt});
        break;
      }
    }
    out.append(op);
  }
  return out;
}

// Rewrites every gate into the same circuit with extra identity-preserving
// padding, so the pair is equivalent but structurally different.
qc::QuantumCircuit pad(const qc::QuantumCircuit& c) {
  qc::QuantumCircuit out(c.numQubits());
  for (const auto& op : c) {
    out.append(op);
    const auto q = op.targets[0];
    out.h(q);
    out.h(q);
  }
  return out;
}

Verdict expectedVerdict(oracle::DenseVerdict v) {
  switch (v) {
  case oracle::DenseVerdict::Equal:
    return Verdict::Equivalent;
  case oracle::DenseVerdict::EqualUpToPhase:
    return Verdict::EquivalentUpToGlobalPhase;
  case oracle::DenseVerdict::Different:
    return Verdict::NotEquivalent;
  }
  return Verdict::NoInformation;
}

TEST(Soundness, StrategiesMatchDenseOracle) {
  std::mt19937_64 rng(4711);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const auto c = oracle::randomCircuit(n, 1 + trial % 20, rng);
    const auto other = trial % 2 == 0 ? pad(c) : mutate(c, rng);
    const auto want = expectedVerdict(oracle::denseEquivalence(c, other));
    for (const auto s : ALL_STRATEGIES) {
      auto cfg = with(s);
      cfg.stimuli = std::size_t{1} << n;
      cfg.seed = static_cast<std::uint64_t>(trial);
      const auto got = ec::check(c, other, cfg).verdict;
      if (s == Strategy::RandomStimuli) {
        // basis-state stimuli cannot see global or relative phases on the
        // output basis; they are only required to be one-sided
        if (want != Verdict::NotEquivalent) {
          EXPECT_EQ(got, Verdict::ProbablyEquivalent) << "trial " << trial;
        }
      } else {
        EXPECT_EQ(got, want) << "trial " << trial << " strategy " << ec::toString(s);
      }
    }
  }
}

TEST(Soundness, CircuitFollowedByInverseIsIdentity) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = oracle::randomCircuit(4, 20, rng);
    auto roundTrip = c;
    for (const auto& op : qc::invert(c)) {
      roundTrip.append(op);
    }
    qc::QuantumCircuit empty(4);
    empty.i(0);
    for (const auto s : {Strategy::Reference, Strategy::Proportional, Strategy::CompilationFlow}) {
      EXPECT_EQ(ec::check(roundTrip, empty, with(s)).verdict, Verdict::Equivalent) << ec::toString(s);
    }
  }
}

// --- step-wise verification -----------------------------------------------------------

TEST(VerificationRun, MidCheckStateIsControlledT) {
  ec::VerificationRun run(fixture("qft3.qasm"), fixture("qft3_compiled.qasm"));
  for (int i = 0; i < 3; ++i) {
    ASSERT_TRUE(run.forward(Side::Left));
  }
  for (int i = 0; i < 6; ++i) {
    ASSERT_TRUE(run.forward(Side::Right));
  }
  auto& p = run.package();
  const std::array<qc::Qubit, 1> control{2};
  const auto ct = p.makeGateDD(gateMatrix(OpType::P, {std::numbers::pi / 4}), 3, control, 0);
  EXPECT_EQ(run.accumulator(), ct);
  EXPECT_FALSE(run.isIdentity(true));
  // the dense picture: identity except the |1?1> diagonal entries
  const auto dense = dd::Package::toDenseMatrix(run.accumulator());
  for (std::size_t i = 0; i < 8; ++i) {
    const auto want = (i & 0b101U) == 0b101U ? std::polar(1., std::numbers::pi / 4) : dd::ComplexValue(1.);
    EXPECT_LT(std::abs(dense[i * 8 + i] - want), 1e-12);
  }
}

TEST(VerificationRun, DrainingEquivalentPairEndsAtIdentity) {
  ec::VerificationRun run(fixture("qft3.qasm"), fixture("qft3_compiled.qasm"));
  EXPECT_TRUE(run.isIdentity(false));
  EXPECT_EQ(dd::Package::nodeCount(run.accumulator()), 3U);
  EXPECT_EQ(run.toEnd(Side::Left), 7U);
  EXPECT_EQ(run.toEnd(Side::Right), 21U);
  EXPECT_TRUE(run.exhausted(Side::Left));
  EXPECT_TRUE(run.exhausted(Side::Right));
  EXPECT_TRUE(run.isIdentity(false));
  EXPECT_EQ(run.accumulator(), run.package().identity(3));
  EXPECT_FALSE(run.forward(Side::Left));
}

TEST(VerificationRun, ToBreakpointFollowsSlices) {
  ec::VerificationRun run(fixture("qft3.qasm"), fixture("qft3_compiled.qasm"));
  EXPECT_EQ(run.toBreakpoint(Side::Right), 1U);
  EXPECT_EQ(run.applied(Side::Right), 1U);
  EXPECT_EQ(run.toBreakpoint(Side::Right), 5U);
  EXPECT_EQ(run.toBreakpoint(Side::Right), 5U);
  // the left circuit has no barriers
  EXPECT_EQ(run.toBreakpoint(Side::Left), 7U);
  run.toStart(Side::Right);
  EXPECT_EQ(run.applied(Side::Right), 0U);
  EXPECT_EQ(run.cursor(Side::Right), 0U);
}

TEST(VerificationRun, BackwardRestoresAccumulator) {
  std::mt19937_64 rng(77);
  const auto a = oracle::randomCircuit(3, 10, rng);
  const auto b = oracle::randomCircuit(3, 10, rng);
  ec::VerificationRun run(a, b);
  const auto start = run.accumulator();
  EXPECT_FALSE(run.backward(Side::Left));
  for (int i = 0; i < 4; ++i) {
    run.forward(Side::Left);
    run.forward(Side::Right);
  }
  for (int i = 0; i < 4; ++i) {
    EXPECT_TRUE(run.backward(Side::Right));
    EXPECT_TRUE(run.backward(Side::Left));
  }
  EXPECT_LT(oracle::maxAbsDiff(dd::Package::toDenseMatrix(run.accumulator()), dd::Package::toDenseMatrix(start)),
            1e-12);
  EXPECT_TRUE(run.isIdentity(false));
}

TEST(VerificationRun, NonEquivalentPairDoesNotReachIdentity) {
  qc::QuantumCircuit x(1);
  x.x(0);
  qc::QuantumCircuit z(1);
  z.z(0);
  ec::VerificationRun run(x, z);
  run.toEnd(Side::Left);
  run.toEnd(Side::Right);
  EXPECT_FALSE(run.isIdentity(true));
}

TEST(VerificationRun, AccumulatorMatchesDenseProduct) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::randomCircuit(3, 8, rng);
    const auto b = oracle::randomCircuit(3, 8, rng);
    ec::VerificationRun run(a, b);
    run.toEnd(Side::Left);
    run.toEnd(Side::Right);
    const auto want = oracle::multiply(oracle::unitary(a), oracle::adjoint(oracle::unitary(b)));
    EXPECT_LT(oracle::maxAbsDiff(dd::Package::toDenseMatrix(run.accumulator()), want.a), 1e-10);
  }
}

} // namespace
