#include "oracle/CircuitOracle.hpp"
#include "qc/Builders.hpp"
#include "qc/Gates.hpp"
#include "qc/Qasm.hpp"
#include "sim/GateDD.hpp"

#include <filesystem>
#include <fstream>
#include <gtest/gtest.h>
#include <numbers>
#include <random>
#include <sstream>

namespace {

using qc::OpType;

const std::filesystem::path FIXTURES{QDD_FIXTURES_DIR};

std::string readFile(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t countType(const qc::QuantumCircuit& c, OpType t) {
  return static_cast<std::size_t>(
      std::count_if(c.begin(), c.end(), [t](const qc::Operation& op) { return op.type == t; }));
}

// --- parsing --------------------------------------------------------------------

TEST(ParseQasm, BellProgram) {
  const auto c = qc::parseQasmFile(FIXTURES / "bell.qasm");
  EXPECT_EQ(c.numQubits(), 2U);
  EXPECT_EQ(c.numClbits(), 2U);
  ASSERT_EQ(c.size(), 4U);
  EXPECT_EQ(c[0].type, OpType::H);
  EXPECT_EQ(c[1].type, OpType::X);
  EXPECT_EQ(c[1].controls, std::vector<qc::Qubit>{0});
  EXPECT_EQ(c[1].targets, std::vector<qc::Qubit>{1});
  EXPECT_EQ(countType(c, OpType::Measure), 2U);
  EXPECT_EQ(c[3].clbits, std::vector<qc::Clbit>{1});
  EXPECT_EQ(c.name, "bell");
}

TEST(ParseQasm, QftSourceHasSevenGates) {
  const auto c = qc::parseQasmFile(FIXTURES / "qft3.qasm");
  EXPECT_EQ(c.size(), 7U);
  EXPECT_EQ(countType(c, OpType::H), 3U);
  EXPECT_EQ(countType(c, OpType::P), 3U);
  EXPECT_EQ(countType(c, OpType::SWAP), 1U);
  for (const auto& op : c) {
    if (op.type == OpType::P) {
      EXPECT_EQ(op.controls.size(), 1U);
    }
  }
  EXPECT_NEAR(c[1].params[0], std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(c[2].params[0], std::numbers::pi / 4, 1e-15);
}

TEST(ParseQasm, CompiledQftHasBarrierSlices) {
  const auto c = qc::parseQasmFile(FIXTURES / "qft3_compiled.qasm");
  EXPECT_EQ(c.nops(), 21U);
  EXPECT_EQ(countType(c, OpType::Barrier), 6U);
  EXPECT_TRUE(c.isUnitary());
}

TEST(ParseQasm, UnknownGateIsPositioned) {
  try {
    qc::parseQasm("OPENQASM 2.0; qreg q[1]; foo q[0];");
    FAIL() << "expected an error";
  } catch (const qc::QasmError& e) {
    EXPECT_EQ(e.line(), 1U);
    EXPECT_EQ(e.column(), 26U);
    EXPECT_NE(e.message().find("unknown gate"), std::string::npos);
  }
}

TEST(ParseQasm, IndexOutOfRangeIsPositioned) {
  try {
    qc::parseQasm("OPENQASM 2.0;\nqreg q[2];\nh q[2];\n");
    FAIL() << "expected an error";
  } catch (const qc::QasmError& e) {
    EXPECT_EQ(e.line(), 3U);
    EXPECT_EQ(e.column(), 5U);
    EXPECT_NE(e.message().find("out of range"), std::string::npos);
  }
}

TEST(ParseQasm, SyntaxErrors) {
  const auto errorAt = [](std::string_view src) {
    try {
      qc::parseQasm(src);
    } catch (const qc::QasmError& e) {
      return std::pair{e.line(), e.column()};
    }
    return std::pair<std::size_t, std::size_t>{0, 0};
  };
  EXPECT_EQ(errorAt("qreg q[2]\nh q[0];"), (std::pair<std::size_t, std::size_t>{2, 1}));
  EXPECT_EQ(errorAt("qreg q[2];\ncx q[0];"), (std::pair<std::size_t, std::size_t>{2, 1}));
  EXPECT_EQ(errorAt("qreg q[2];\nrx q[0];"), (std::pair<std::size_t, std::size_t>{2, 1}));
  EXPECT_EQ(errorAt("qreg q[2];\nh r[0];"), (std::pair<std::size_t, std::size_t>{2, 3}));
  EXPECT_EQ(errorAt("qreg q[2];\ncx q[0],q[0];"), (std::pair<std::size_t, std::size_t>{2, 1}));
  EXPECT_EQ(errorAt("qreg q[2];\ngate foo a { h a; }"), (std::pair<std::size_t, std::size_t>{2, 1}));
  EXPECT_EQ(errorAt("qreg q[2];\nopaque bar a;"), (std::pair<std::size_t, std::size_t>{2, 1}));
  EXPECT_EQ(errorAt("qreg q[1];\nrz(theta) q[0];"), (std::pair<std::size_t, std::size_t>{2, 4}));
  EXPECT_EQ(errorAt("OPENQASM 3.0;"), (std::pair<std::size_t, std::size_t>{1, 10}));
  EXPECT_EQ(errorAt("qreg q[1]; /* open"), (std::pair<std::size_t, std::size_t>{1, 12}));
  EXPECT_EQ(errorAt("qreg q[1]; creg c[1];\nif(c==1) measure q[0] -> c[0];"),
            (std::pair<std::size_t, std::size_t>{2, 10}));
  EXPECT_EQ(errorAt("qreg q[1]; creg c[1];\nif(c==2) x q[0];"), (std::pair<std::size_t, std::size_t>{2, 7}));
  EXPECT_EQ(errorAt("qreg q[1]; qreg q[2];"), (std::pair<std::size_t, std::size_t>{1, 17}));
  EXPECT_EQ(errorAt("qreg q[1]; h q[0] $"), (std::pair<std::size_t, std::size_t>{1, 19}));
}

TEST(ParseQasm, BroadcastAndMultipleRegisters) {
  const auto c = qc::parseQasm(R"(OPENQASM 2.0;
include "qelib1.inc";
qreg a[2];
qreg b[2];
creg m[2];
h a;
cx a,b;
cx a[0],b;
measure b -> m;
barrier a,b[1];
reset a;
)");
  EXPECT_EQ(c.numQubits(), 4U);
  EXPECT_EQ(countType(c, OpType::H), 2U);
  ASSERT_EQ(countType(c, OpType::X), 4U);
  EXPECT_EQ(c[2].controls, std::vector<qc::Qubit>{0});
  EXPECT_EQ(c[2].targets, std::vector<qc::Qubit>{2});
  EXPECT_EQ(c[3].controls, std::vector<qc::Qubit>{1});
  EXPECT_EQ(c[3].targets, std::vector<qc::Qubit>{3});
  EXPECT_EQ(c[5].controls, std::vector<qc::Qubit>{0});
  EXPECT_EQ(c[5].targets, std::vector<qc::Qubit>{3});
  EXPECT_EQ(c[6].targets, std::vector<qc::Qubit>{2});
  EXPECT_EQ(c[6].clbits, std::vector<qc::Clbit>{0});
  EXPECT_EQ(c[8].type, OpType::Barrier);
  EXPECT_EQ(c[8].targets, (std::vector<qc::Qubit>{0, 1, 3}));
  EXPECT_EQ(countType(c, OpType::Reset), 2U);
  EXPECT_THROW(qc::parseQasm("qreg a[2]; qreg b[3]; cx a,b;"), qc::QasmError);
}

TEST(ParseQasm, ControlPrefixesAndAliases) {
  const auto c = qc::parseQasm(R"(qreg q[4];
ccx q[0],q[1],q[2];
cccz q[0],q[1],q[2],q[3];
cswap q[0],q[1],q[2];
cu1(pi) q[0],q[1];
crz(0.5) q[1],q[0];
U(1,2,3) q[0];
CX q[0],q[3];
u2(0,pi) q[1];
id q[2];
sdg q[3];
tdg q[3];
)");
  ASSERT_EQ(c.size(), 11U);
  EXPECT_EQ(c[0].type, OpType::X);
  EXPECT_EQ(c[0].controls.size(), 2U);
  EXPECT_EQ(c[1].type, OpType::Z);
  EXPECT_EQ(c[1].controls.size(), 3U);
  EXPECT_EQ(c[2].type, OpType::SWAP);
  EXPECT_EQ(c[2].targets, (std::vector<qc::Qubit>{1, 2}));
  EXPECT_EQ(c[3].type, OpType::P);
  EXPECT_EQ(c[4].type, OpType::RZ);
  EXPECT_EQ(c[5].type, OpType::U3);
  EXPECT_EQ(c[5].params, (std::vector<double>{1., 2., 3.}));
  EXPECT_EQ(c[6].controls, std::vector<qc::Qubit>{0});
  EXPECT_EQ(c[7].type, OpType::U2);
  EXPECT_EQ(c[8].type, OpType::I);
  EXPECT_EQ(c[9].type, OpType::Sdg);
  EXPECT_EQ(c[10].type, OpType::Tdg);
}

TEST(ParseQasm, ParameterExpressions) {
  const auto param = [](const std::string& expr) {
    return qc::parseQasm("qreg q[1]; rz(" + expr + ") q[0];")[0].params[0];
  };
  constexpr double pi = std::numbers::pi;
  EXPECT_DOUBLE_EQ(param("pi/2"), pi / 2);
  EXPECT_DOUBLE_EQ(param("-pi/4"), -pi / 4);
  EXPECT_DOUBLE_EQ(param("2*pi - 1"), 2 * pi - 1);
  EXPECT_DOUBLE_EQ(param("-(1+2)*3"), -9.);
  EXPECT_DOUBLE_EQ(param("2^3^2"), 512.);
  EXPECT_DOUBLE_EQ(param("-2^2"), -4.);
  EXPECT_DOUBLE_EQ(param("sin(pi/2) + cos(0)"), 2.);
  EXPECT_DOUBLE_EQ(param("sqrt(2)*ln(exp(1))"), std::sqrt(2.));
  EXPECT_DOUBLE_EQ(param("tan(0)"), 0.);
  EXPECT_DOUBLE_EQ(param("1.5e-3"), 1.5e-3);
  EXPECT_DOUBLE_EQ(param(".25"), 0.25);
  EXPECT_DOUBLE_EQ(param("3E2"), 300.);
  EXPECT_THROW(param("1/0"), qc::QasmError);
  EXPECT_THROW(param("ln(0)"), qc::QasmError);
  EXPECT_THROW(param("1+"), qc::QasmError);
}

TEST(ParseQasm, ClassicalCondition) {
  const auto c = qc::parseQasm("qreg q[1]; creg a[1]; creg b[2]; if(b==3) x q[0];");
  ASSERT_TRUE(c[0].condition.has_value());
  EXPECT_EQ(c[0].condition->start, 1U);
  EXPECT_EQ(c[0].condition->width, 2U);
  EXPECT_EQ(c[0].condition->value, 3U);
  EXPECT_FALSE(c[0].isUnitary());
}

TEST(ParseQasm, CommentsAndWhitespace) {
  const auto c = qc::parseQasm("// header\nOPENQASM 2.0; /* multi\nline */ qreg q[1];\n\n  x   q [ 0 ] ; // tail");
  EXPECT_EQ(c.size(), 1U);
}

// --- emission ---------------------------------------------------------------------

TEST(EmitQasm, RoundTripsFixtures) {
  for (const auto& entry : std::filesystem::directory_iterator(FIXTURES)) {
    if (entry.path().extension() != ".qasm") {
      continue;
    }
    const auto c = qc::parseQasmFile(entry.path());
    const auto back = qc::parseQasm(qc::emitQasm(c));
    EXPECT_TRUE(qc::structurallyEqual(c, back)) << entry.path();
  }
}

TEST(EmitQasm, RoundTripsGenerators) {
  const auto qft = qc::buildQft(3);
  EXPECT_TRUE(qc::structurallyEqual(qft, qc::parseQasm(qc::emitQasm(qft))));
  const auto grover = qc::buildGrover(3, "101");
  EXPECT_TRUE(qc::structurallyEqual(grover, qc::parseQasm(qc::emitQasm(grover))));
}

TEST(EmitQasm, RoundTripsConditionPrefix) {
  qc::QuantumCircuit c(2, 0);
  c.addClassicalRegister("flag", 2);
  c.h(0);
  c.measure(0, 1);
  qc::Operation op;
  op.type = OpType::X;
  op.targets = {1};
  op.condition = qc::ClassicalCondition{0, 2, 2};
  c.append(op);
  const auto text = qc::emitQasm(c);
  EXPECT_NE(text.find("if(flag==2) x q[1];"), std::string::npos);
  EXPECT_TRUE(qc::structurallyEqual(c, qc::parseQasm(text)));
}

TEST(EmitQasm, RoundTripsRandomCircuitsExactly) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = oracle::randomCircuit(4, 25, rng);
    const auto back = qc::parseQasm(qc::emitQasm(c));
    ASSERT_TRUE(qc::structurallyEqual(c, back, 0.));
  }
}

// --- gate matrices ------------------------------------------------------------------

TEST(GateBaseMatrix, HadamardMatchesDefinition) {
  const auto h = qc::gateBaseMatrix(OpType::H, {});
  const double r = 1. / std::sqrt(2.);
  EXPECT_EQ(h, (std::vector<qc::Complex>{r, r, r, -r}));
}

TEST(GateBaseMatrix, PhaseOfHalfPiIsS) {
  const std::array<double, 1> half{std::numbers::pi / 2};
  const auto p = qc::gateBaseMatrix(OpType::P, half);
  const auto s = qc::gateBaseMatrix(OpType::S, {});
  EXPECT_LT(oracle::maxAbsDiff(p, s), 1e-16);
  const std::array<double, 1> quarter{std::numbers::pi / 4};
  EXPECT_LT(oracle::maxAbsDiff(qc::gateBaseMatrix(OpType::P, quarter), qc::gateBaseMatrix(OpType::T, {})), 1e-15);
}

TEST(GateBaseMatrix, SwapIsPermutation) {
  const auto m = qc::gateBaseMatrix(OpType::SWAP, {});
  ASSERT_EQ(m.size(), 16U);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      const bool one = (r == 0 && c == 0) || (r == 1 && c == 2) || (r == 2 && c == 1) || (r == 3 && c == 3);
      EXPECT_EQ(m[r * 4 + c], qc::Complex(one ? 1. : 0.));
    }
  }
}

TEST(GateBaseMatrix, ArityMismatchThrows) {
  const std::array<double, 1> one{1.};
  EXPECT_THROW(qc::gateBaseMatrix(OpType::H, one), std::invalid_argument);
  EXPECT_THROW(qc::gateBaseMatrix(OpType::U3, one), std::invalid_argument);
  EXPECT_THROW(qc::gateBaseMatrix(OpType::Measure, {}), std::invalid_argument);
}

TEST(GateBaseMatrix, EveryKindIsUnitary) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> angle(-10., 10.);
  for (int k = 0; k <= static_cast<int>(OpType::SWAP); ++k) {
    const auto type = static_cast<OpType>(k);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> params(qc::numParams(type));
      for (auto& p : params) {
        p = angle(rng);
      }
      const auto m = qc::gateBaseMatrix(type, params);
      const auto dim = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(m.size()))));
      oracle::Matrix u(dim);
      u.a = m;
      const auto prod = oracle::multiply(oracle::adjoint(u), u);
      EXPECT_LT(oracle::maxAbsDiff(prod.a, oracle::Matrix::identity(dim).a), 1e-15) << qc::toString(type);
    }
  }
}

// --- inversion ----------------------------------------------------------------------

TEST(Invert, QftTimesInverseIsIdentityOnBasisStates) {
  const auto qft = qc::buildQft(3);
  auto both = qft;
  for (const auto& op : qc::invert(qft)) {
    both.append(op);
  }
  dd::Package p;
  for (std::uint64_t x = 0; x < 8; ++x) {
    std::string bits;
    for (int b = 2; b >= 0; --b) {
      bits += ((x >> static_cast<unsigned>(b)) & 1U) != 0 ? '1' : '0';
    }
    auto v = p.basisState(3, bits);
    for (const auto& op : both) {
      v = p.multiply(sim::gateDD(p, op, 3), v);
    }
    EXPECT_EQ(v, p.basisState(3, bits)) << bits;
  }
}

TEST(Invert, HadamardOnlyCircuitIsSelfInverse) {
  qc::QuantumCircuit c(3);
  c.h(0);
  c.h(2);
  c.barrier();
  c.h(1);
  EXPECT_TRUE(qc::structurallyEqual(qc::invert(c), [] {
    qc::QuantumCircuit r(3);
    r.h(1);
    r.barrier();
    r.h(2);
    r.h(0);
    return r;
  }()));
  qc::QuantumCircuit h(1);
  h.h(0);
  EXPECT_TRUE(qc::structurallyEqual(qc::invert(h), h));
}

TEST(Invert, MeasurementIsNotInvertible) {
  const auto bell = qc::parseQasmFile(FIXTURES / "bell.qasm");
  EXPECT_THROW(qc::invert(bell), qc::NotInvertibleError);
  const auto cond = qc::parseQasm("qreg q[1]; creg c[1]; if(c==1) x q[0];");
  EXPECT_THROW(qc::invert(cond), qc::NotInvertibleError);
}

TEST(Invert, IsInvolution) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = oracle::randomCircuit(4, 20, rng);
    EXPECT_TRUE(qc::structurallyEqual(qc::invert(qc::invert(c)), c));
  }
}

TEST(Invert, AdjointMatchesDenseOracle) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = oracle::randomCircuit(3, 15, rng);
    const auto u = oracle::unitary(c);
    const auto inv = oracle::unitary(qc::invert(c));
    EXPECT_LT(oracle::maxAbsDiff(inv.a, oracle::adjoint(u).a), 1e-12);
  }
}

TEST(StructuralEquality, AnglesCompareModuloPeriod) {
  qc::QuantumCircuit a(1);
  qc::QuantumCircuit b(1);
  a.p(0.5, 0);
  b.p(0.5 + 2 * std::numbers::pi, 0);
  EXPECT_TRUE(qc::structurallyEqual(a, b));
  qc::QuantumCircuit c(1);
  qc::QuantumCircuit d(1);
  c.gate(OpType::RZ, {0}, {}, {0.5});
  d.gate(OpType::RZ, {0}, {}, {0.5 + 2 * std::numbers::pi});
  EXPECT_FALSE(qc::structurallyEqual(c, d));
  qc::QuantumCircuit e(1);
  e.gate(OpType::RZ, {0}, {}, {0.5 + 4 * std::numbers::pi});
  EXPECT_TRUE(qc::structurallyEqual(c, e));
}

// --- generators ---------------------------------------------------------------------

TEST(BuildQft, ThreeQubitsSevenOperations) {
  const auto c = qc::buildQft(3);
  EXPECT_EQ(c.size(), 7U);
  EXPECT_TRUE(qc::structurallyEqual(c, qc::parseQasmFile(FIXTURES / "qft3.qasm")));
  EXPECT_EQ(qc::buildQft(3, false).size(), 6U);
}

TEST(BuildQft, SingleQubitIsHadamard) {
  const auto c = qc::buildQft(1);
  ASSERT_EQ(c.size(), 1U);
  EXPECT_EQ(c[0].type, OpType::H);
  EXPECT_THROW(qc::buildQft(0), std::invalid_argument);
}

TEST(BuildQft, FunctionalityIsFourierMatrix) {
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto u = oracle::unitary(qc::buildQft(n));
    const auto dim = std::size_t{1} << n;
    double worst = 0.;
    for (std::size_t j = 0; j < dim; ++j) {
      for (std::size_t k = 0; k < dim; ++k) {
        const auto expected = std::polar(1. / std::sqrt(static_cast<double>(dim)),
                                         2 * std::numbers::pi * static_cast<double>((j * k) % dim) /
                                             static_cast<double>(dim));
        worst = std::max(worst, std::abs(u(j, k) - expected));
      }
    }
    EXPECT_LT(worst, 1e-12) << n;
  }
}

TEST(BuildQft, GroundStateBecomesUniformSuperposition) {
  for (std::size_t n = 1; n <= 7; ++n) {
    dd::Package p;
    auto v = p.basisState(n, std::string(n, '0'));
    for (const auto& op : qc::buildQft(n)) {
      v = p.multiply(sim::gateDD(p, op, n), v);
    }
    const double amp = 1. / std::sqrt(static_cast<double>(std::size_t{1} << n));
    for (const auto a : dd::Package::toDenseVector(v)) {
      EXPECT_LT(std::abs(a - amp), 1e-12);
    }
  }
}

TEST(BuildGrover, ReportsThreeQubitsForTwoSearchQubits) {
  const auto c = qc::buildGrover(2, "00");
  EXPECT_EQ(c.numQubits(), 3U);
  EXPECT_TRUE(qc::structurallyEqual(c, qc::parseQasmFile(FIXTURES / "grover_2.qasm")));
  EXPECT_EQ(qc::groverIterations(1), 1U);
  EXPECT_EQ(qc::groverIterations(2), 1U);
  EXPECT_EQ(qc::groverIterations(3), 2U);
  EXPECT_EQ(qc::groverIterations(4), 3U);
  EXPECT_THROW(qc::buildGrover(2, "0"), std::invalid_argument);
  EXPECT_THROW(qc::buildGrover(2, "0a"), std::invalid_argument);
}

TEST(BuildGrover, DenseOracleFindsTarget) {
  for (const auto* target : {"00", "01", "10", "11"}) {
    const auto c = qc::buildGrover(2, target);
    const auto state = oracle::simulate(c, oracle::basisState(3, 0));
    const auto t = std::stoul(target, nullptr, 2);
    for (std::size_t i = 0; i < 8; ++i) {
      const double p = std::norm(state[i]);
      const bool hit = (i & 3U) == t;
      EXPECT_NEAR(p, hit ? 0.5 : 0., 1e-12) << target << " " << i;
    }
  }
}

TEST(BuildGrover, LargerSearchAmplifiesTarget) {
  const auto c = qc::buildGrover(4, "1011");
  const auto state = oracle::simulate(c, oracle::basisState(5, 0));
  double p = 0.;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if ((i & 15U) == 0b1011) {
      p += std::norm(state[i]);
    }
  }
  EXPECT_GT(p, 0.9);
}

// --- circuit validation -------------------------------------------------------------

TEST(QuantumCircuit, RejectsInvalidOperations) {
  qc::QuantumCircuit c(2, 1);
  EXPECT_THROW(c.h(2), qc::CircuitError);
  EXPECT_THROW(c.cx(0, 0), qc::CircuitError);
  EXPECT_THROW(c.gate(OpType::SWAP, {0}), qc::CircuitError);
  EXPECT_THROW(c.gate(OpType::P, {0}), qc::CircuitError);
  EXPECT_THROW(c.measure(0, 1), qc::CircuitError);
  qc::Operation m;
  m.type = OpType::Measure;
  m.targets = {0};
  m.clbits = {0};
  m.condition = qc::ClassicalCondition{0, 1, 1};
  EXPECT_THROW(c.append(m), qc::CircuitError);
  c.barrier();
  c.h(0);
  c.measure(0, 0);
  EXPECT_EQ(c.nops(), 2U);
  EXPECT_FALSE(c.isUnitary());
}

// --- parser fuzzing -----------------------------------------------------------------

TEST(ParserFuzz, MutatedCorpusNeverCrashes) {
  std::vector<std::string> corpus;
  for (const auto& entry : std::filesystem::directory_iterator(FIXTURES)) {
    corpus.push_back(readFile(entry.path()));
  }
  const std::string alphabet = "qc[];,()->=+-*/^ \n0123456789.eEpixhsdgtuswapbrm\"/*_{}$";
  std::mt19937_64 rng(4242);
  std::size_t parsed = 0;
  std::size_t rejected = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    auto text = corpus[rng() % corpus.size()];
    const auto edits = 1 + rng() % 4;
    for (std::size_t e = 0; e < edits && !text.empty(); ++e) {
      const auto pos = rng() % text.size();
      switch (rng() % 4) {
      case 0:
        text.erase(pos, 1 + rng() % 5);
        break;
      case 1:
        text.insert(pos, 1, alphabet[rng() % alphabet.size()]);
        break;
      case 2:
        text[pos] = alphabet[rng() % alphabet.size()];
        break;
      default:
        text.insert(pos, text.substr(rng() % text.size(), 1 + rng() % 10));
        break;
      }
    }
    try {
      const auto c = qc::parseQasm(text);
      ++parsed;
      const auto back = qc::parseQasm(qc::emitQasm(c));
      ASSERT_TRUE(qc::structurallyEqual(c, back)) << text;
    } catch (const qc::QasmError& e) {
      ++rejected;
      ASSERT_GE(e.line(), 1U);
      ASSERT_GE(e.column(), 1U);
    }
  }
  EXPECT_GT(parsed, 0U);
  EXPECT_GT(rejected, 0U);
}

} // namespace
