#include "cli/Cli.hpp"

#include "ec/Equivalence.hpp"
#include "qc/Builders.hpp"
#include "qc/Qasm.hpp"
#include "service/HttpServer.hpp"
#include "service/SessionManager.hpp"
#include "sim/GateDD.hpp"
#include "sim/Simulator.hpp"
#include "viz/Export.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

namespace cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

double secondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

qc::QuantumCircuit loadCircuit(const std::string& file) {
  const std::filesystem::path path(file);
  if (path.extension() == ".real") {
    throw std::runtime_error(file + ": RevLib .real files are not supported, convert to OpenQASM first");
  }
  if (!std::filesystem::exists(path)) {
    throw std::runtime_error(file + ": no such file");
  }
  try {
    return qc::parseQasmFile(path);
  } catch (const qc::QasmError& e) {
    throw std::runtime_error(file + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                             ": error: " + e.message());
  }
}

dd::EngineConfig engineConfig(const std::string& configFile, std::uint64_t seed) {
  dd::EngineConfig c = configFile.empty() ? dd::EngineConfig{} : dd::EngineConfig::fromFile(configFile);
  c = c.withEnvironment();
  c.seed = seed;
  c.validate();
  return c;
}

struct SimulateOptions {
  std::string file;
  std::optional<std::size_t> grover;
  std::optional<std::size_t> qft;
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  bool printStatistics = false;
};

int simulate(const SimulateOptions& o, const std::string& configFile, std::ostream& out) {
  const int sources = static_cast<int>(!o.file.empty()) + static_cast<int>(o.grover.has_value()) +
                      static_cast<int>(o.qft.has_value());
  if (sources != 1) {
    throw UsageError("exactly one of --simulate_file, --simulate_grover, --simulate_qft is required");
  }

  qc::QuantumCircuit circuit(0);
  std::string benchmark;
  if (o.grover) {
    if (*o.grover == 0) {
      throw UsageError("--simulate_grover needs at least one search qubit");
    }
    circuit = qc::buildGrover(*o.grover, std::string(*o.grover, '0'));
    benchmark = "grover_" + std::to_string(*o.grover);
  } else if (o.qft) {
    if (*o.qft == 0) {
      throw UsageError("--simulate_qft needs at least one qubit");
    }
    circuit = qc::buildQft(*o.qft);
    benchmark = "qft_" + std::to_string(*o.qft);
  } else {
    circuit = loadCircuit(o.file);
    benchmark = std::filesystem::path(o.file).stem().string();
  }
  const auto nQubits = circuit.numQubits();

  sim::SimulationRun run(std::move(circuit), engineConfig(configFile, o.seed));
  const auto simStart = Clock::now();
  run.runToCompletion();
  const double simulationTime = secondsSince(simStart);

  const auto measStart = Clock::now();
  const auto histogram = sim::sample(run.state(), o.shots, run.rng());
  const double measurementTime = secondsSince(measStart);

  Json result;
  result["measurements"] = Json::object();
  for (const auto& [bits, count] : histogram.counts) {
    result["measurements"][bits] = count;
  }
  result["non_zero_entries"] = sim::countNonZeroEntries(run.state());
  if (o.printStatistics) {
    result["statistics"] = Json{{"simulation_time", simulationTime},
                                {"measurement_time", measurementTime},
                                {"benchmark", benchmark},
                                {"shots", o.shots},
                                {"n_qubits", nQubits},
                                {"applied_gates", run.telemetry().appliedGates},
                                {"max_nodes", run.telemetry().maxNodes},
                                {"seed", o.seed}};
  }
  out << result.dump(2) << '\n';
  return 0;
}

struct CheckOptions {
  std::string file1;
  std::string file2;
  std::string strategy = "proportional";
  std::size_t stimuli = 16;
  bool globalPhase = false;
  std::uint64_t seed = 0;
};

int check(const CheckOptions& o, const std::string& configFile, std::ostream& out) {
  ec::Configuration config;
  try {
    config.strategy = ec::parseStrategy(o.strategy);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (o.stimuli == 0) {
    throw UsageError("--stimuli-count must be at least 1");
  }
  config.stimuli = o.stimuli;
  config.foldGlobalPhase = o.globalPhase;
  config.seed = o.seed;
  config.engine = engineConfig(configFile, o.seed);

  const auto c1 = loadCircuit(o.file1);
  const auto c2 = loadCircuit(o.file2);
  const auto r = ec::check(c1, c2, config);

  const Json result{{"verdict", ec::toString(r.verdict)},
                    {"peakNodes", r.peakNodes},
                    {"gatesApplied", {{"left", r.gatesApplied.first}, {"right", r.gatesApplied.second}}},
                    {"elapsed", r.elapsed},
                    {"strategy", ec::toString(r.strategy)}};
  out << result.dump(2) << '\n';
  return 0;
}

struct DotOptions {
  std::string file;
  std::string style = "classic";
  bool functionality = false;
  bool hideWeights = false;
  std::uint64_t seed = 0;
  std::string output;
};

int dot(const DotOptions& o, const std::string& configFile, std::ostream& out) {
  viz::StyleOptions style = o.style == "colored" ? viz::StyleOptions::colored() : viz::StyleOptions::classic();
  if (o.hideWeights) {
    style.showWeights = false;
  }
  auto circuit = loadCircuit(o.file);
  const auto engine = engineConfig(configFile, o.seed);

  std::string text;
  if (o.functionality) {
    dd::Package p(engine);
    text = viz::toDot(sim::buildFunctionality(p, circuit).dd, style);
  } else {
    sim::SimulationRun run(std::move(circuit), engine);
    run.runToCompletion();
    text = viz::toDot(run.state(), style);
  }

  if (o.output.empty()) {
    out << text;
  } else {
    std::ofstream f(o.output);
    if (!f) {
      throw std::runtime_error(o.output + ": cannot open for writing");
    }
    f << text;
  }
  return 0;
}

struct ServeOptions {
  std::optional<std::string> host;
  std::optional<int> port;
  std::optional<std::size_t> denseThreshold;
  std::optional<std::size_t> ttl;
};

int serve(const ServeOptions& o, const std::string& configFile, std::ostream& err) {
  auto config = service::ServiceConfig{}.withEnvironment();
  if (!configFile.empty()) {
    config.engine = dd::EngineConfig::fromFile(configFile, config.engine);
  }
  if (o.host) {
    config.host = *o.host;
  }
  if (o.port) {
    config.port = *o.port;
  }
  if (o.denseThreshold) {
    config.denseThreshold = *o.denseThreshold;
  }
  if (o.ttl) {
    config.sessionTtl = std::chrono::seconds(*o.ttl);
  }
  config.engine.validate();

  service::SessionManager sessions(config);
  service::HttpServer server(sessions);
  const int port = server.bind();
  if (port < 0) {
    err << "qdd: cannot bind " << config.host << ":" << config.port << '\n';
    return 1;
  }
  err << "qdd: listening on http://" << config.host << ":" << port << '\n' << std::flush;
  return server.listen() ? 0 : 1;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decision diagram based quantum circuit simulation and verification", "qdd"};
  app.require_subcommand(1);
  std::string configFile;
  app.add_option("--config", configFile, "Engine configuration file (key = value lines)")->check(CLI::ExistingFile);

  SimulateOptions sim;
  auto* simCmd = app.add_subcommand("simulate", "Simulate a circuit and sample measurement outcomes");
  simCmd->add_option("--simulate_file", sim.file, "OpenQASM 2.0 circuit");
  simCmd->add_option("--simulate_grover", sim.grover, "Grover search over N qubits (plus one flag qubit)");
  simCmd->add_option("--simulate_qft", sim.qft, "N-qubit quantum Fourier transform");
  simCmd->add_option("--shots", sim.shots, "Number of samples drawn from the final state");
  simCmd->add_option("--seed", sim.seed, "Seed for measurement decisions and sampling");
  simCmd->add_flag("--ps", sim.printStatistics, "Print statistics");

  CheckOptions chk;
  auto* checkCmd = app.add_subcommand("check", "Check two circuits for equivalence");
  checkCmd->add_option("file1", chk.file1)->required();
  checkCmd->add_option("file2", chk.file2)->required();
  checkCmd->add_option("--strategy", chk.strategy, "reference, proportional, flow or stimuli")
      ->check(CLI::IsMember({"reference", "proportional", "flow", "compilation_flow", "stimuli", "random_stimuli"}));
  checkCmd->add_option("--stimuli-count", chk.stimuli, "Random basis states for the stimuli strategy");
  checkCmd->add_flag("--global-phase", chk.globalPhase, "Treat a global phase difference as equivalent");
  checkCmd->add_option("--seed", chk.seed, "Seed for stimuli generation");

  DotOptions dt;
  auto* dotCmd = app.add_subcommand("dot", "Write the final state (or the functionality) as Graphviz DOT");
  dotCmd->add_option("file", dt.file)->required();
  dotCmd->add_option("--style", dt.style)->check(CLI::IsMember({"classic", "colored"}));
  dotCmd->add_flag("--functionality", dt.functionality, "Export the circuit's matrix instead of its final state");
  dotCmd->add_flag("--no-weights", dt.hideWeights, "Omit edge weight labels");
  dotCmd->add_option("--seed", dt.seed, "Seed for measurement decisions");
  dotCmd->add_option("-o,--output", dt.output, "Output file (default: standard output)");

  ServeOptions sv;
  auto* serveCmd = app.add_subcommand("serve", "Serve the session HTTP/JSON API");
  serveCmd->add_option("--host", sv.host);
  serveCmd->add_option("--port", sv.port)->check(CLI::Range(0, 65535));
  serveCmd->add_option("--dense-threshold", sv.denseThreshold);
  serveCmd->add_option("--ttl", sv.ttl, "Idle session lifetime in seconds");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return e.get_exit_code() == 0 ? 0 : (code == 0 ? 1 : code);
  }

  try {
    if (*simCmd) {
      return simulate(sim, configFile, out);
    }
    if (*checkCmd) {
      return check(chk, configFile, out);
    }
    if (*dotCmd) {
      return dot(dt, configFile, out);
    }
    return serve(sv, configFile, err);
  } catch (const UsageError& e) {
    err << "qdd: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "qdd: " << e.what() << '\n';
    return 1;
  }
}

} // namespace cli
