#include "service/SessionManager.hpp"

#include "ec/Equivalence.hpp"
#include "qc/Qasm.hpp"
#include "sim/Simulator.hpp"
#include "viz/Export.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>

namespace service {

namespace {

constexpr std::size_t MAX_REMEMBERED_EXPIRED = 4096;

enum class Mode : std::uint8_t { Simulate, Verify };

std::optional<std::string> env(const char* name) {
  if (const char* v = std::getenv(name); v != nullptr && *v != '\0') {
    return std::string(v);
  }
  return std::nullopt;
}

Json complexArray(const std::vector<dd::ComplexValue>& values) {
  auto out = Json::array();
  for (const auto& c : values) {
    out.push_back(Json::array({c.real(), c.imag()}));
  }
  return out;
}

ServiceError badRequest(const std::string& message) { return {400, "bad_request", message}; }

const Json& requireField(const Json& request, const char* key) {
  if (!request.is_object() || !request.contains(key)) {
    throw badRequest(std::string("missing field '") + key + "'");
  }
  return request.at(key);
}

std::string requireString(const Json& request, const char* key) {
  const auto& v = requireField(request, key);
  if (!v.is_string()) {
    throw badRequest(std::string("field '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

void rejectUnsupportedFile(const Json& request, const char* key) {
  if (!request.contains(key)) {
    return;
  }
  const auto& v = request.at(key);
  if (!v.is_string()) {
    throw badRequest(std::string("field '") + key + "' must be a string");
  }
  const auto name = v.get<std::string>();
  if (name.size() >= 5 && name.compare(name.size() - 5, 5, ".real") == 0) {
    throw ServiceError(415, "unsupported_format", "'.real' circuit files are not supported; use OpenQASM 2.0",
                       Json{{"filename", name}});
  }
}

qc::QuantumCircuit parseSource(const Json& request, const char* key) {
  const auto text = requireString(request, key);
  try {
    return qc::parseQasm(text);
  } catch (const qc::QasmError& e) {
    throw ServiceError(400, "parse_error", e.what(),
                       Json{{"source", key}, {"line", e.line()}, {"column", e.column()}, {"message", e.message()}});
  }
}

dd::EngineConfig engineFor(const ServiceConfig& config, const Json& request) {
  auto engine = config.engine;
  if (!request.contains("options")) {
    return engine;
  }
  const auto& options = request.at("options");
  if (!options.is_object()) {
    throw badRequest("'options' must be an object");
  }
  try {
    if (options.contains("seed")) {
      engine.seed = options.at("seed").get<std::uint64_t>();
    }
    if (options.contains("tolerance")) {
      engine.tolerance = options.at("tolerance").get<double>();
    }
    engine.validate();
  } catch (const nlohmann::json::exception& e) {
    throw badRequest(std::string("invalid options: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw badRequest(std::string("invalid options: ") + e.what());
  }
  return engine;
}

} // namespace

struct Session {
  std::mutex mutex;
  std::string id;
  Mode mode = Mode::Simulate;
  std::unique_ptr<sim::SimulationRun> sim;
  std::unique_ptr<ec::VerificationRun> verify;
  Clock::time_point lastTouched;
};

namespace {

Json simulateView(Session& s, std::size_t denseThreshold) {
  auto& run = *s.sim;
  const auto n = run.circuit().numQubits();
  Json view;
  view["sessionId"] = s.id;
  view["mode"] = "simulate";
  view["numQubits"] = n;
  view["snapshot"] = viz::toJson(viz::toSnapshot(run.state()));
  if (n <= denseThreshold) {
    view["denseVector"] = complexArray(dd::Package::toDenseVector(run.state()));
  }
  view["programCounters"] = {{"single", run.pc()}, {"length", run.circuit().size()}};
  view["finished"] = run.finished();
  if (const auto& p = run.pending()) {
    view["pendingDecision"] = {{"qubit", p->qubit},
                               {"p0", p->p0},
                               {"p1", p->p1},
                               {"kind", p->kind == sim::PendingDecision::Kind::Measure ? "measure" : "reset"}};
  } else {
    view["pendingDecision"] = nullptr;
  }
  std::string bits;
  for (auto it = run.clbits().rbegin(); it != run.clbits().rend(); ++it) {
    bits += *it ? '1' : '0';
  }
  view["classicalBits"] = bits;
  const auto& t = run.telemetry();
  view["telemetry"] = {{"nodeCount", dd::Package::nodeCount(run.state())},
                       {"maxNodes", t.maxNodes},
                       {"appliedGates", t.appliedGates},
                       {"simulationTime", t.simulationTime}};
  return view;
}

Json verifyView(Session& s, std::size_t denseThreshold) {
  using Side = ec::VerificationRun::Side;
  auto& run = *s.verify;
  const auto n = run.circuit(Side::Left).numQubits();
  Json view;
  view["sessionId"] = s.id;
  view["mode"] = "verify";
  view["numQubits"] = n;
  view["snapshot"] = viz::toJson(viz::toSnapshot(run.accumulator()));
  if (n <= denseThreshold) {
    // row-major entries of the accumulator
    view["denseVector"] = complexArray(dd::Package::toDenseMatrix(run.accumulator()));
  }
  view["programCounters"] = {{"left", run.cursor(Side::Left)},
                             {"right", run.cursor(Side::Right)},
                             {"leftLength", run.circuit(Side::Left).size()},
                             {"rightLength", run.circuit(Side::Right).size()}};
  view["finished"] = run.exhausted(Side::Left) && run.exhausted(Side::Right);
  view["pendingDecision"] = nullptr;
  view["identity"] = {{"exact", run.isIdentity(false)}, {"upToGlobalPhase", run.isIdentity(true)}};
  view["telemetry"] = {{"nodeCount", dd::Package::nodeCount(run.accumulator())},
                       {"peakNodes", run.peakNodes()},
                       {"appliedGates", {{"left", run.applied(Side::Left)}, {"right", run.applied(Side::Right)}}}};
  return view;
}

Json view(Session& s, std::size_t denseThreshold) {
  return s.mode == Mode::Simulate ? simulateView(s, denseThreshold) : verifyView(s, denseThreshold);
}

void stepSimulation(sim::SimulationRun& run, const std::string& side, const std::string& action) {
  if (side != "single") {
    throw badRequest("simulation sessions only have side 'single'");
  }
  if (run.pending() && action != "backward" && action != "start") {
    throw ServiceError(409, "decision_pending", "a measurement or reset decision is pending");
  }
  if (action == "forward") {
    run.step();
  } else if (action == "backward") {
    run.stepBackward();
  } else if (action == "to-breakpoint") {
    run.runTo(sim::RunTarget::NextBreakpoint);
  } else if (action == "to-end") {
    run.runTo(sim::RunTarget::End);
  } else if (action == "start") {
    run.restart();
  } else {
    throw badRequest("unknown action '" + action + "'");
  }
}

void stepVerification(ec::VerificationRun& run, const std::string& sideName, const std::string& action) {
  using Side = ec::VerificationRun::Side;
  if (sideName != "left" && sideName != "right") {
    throw badRequest("verification sessions need side 'left' or 'right'");
  }
  const auto side = sideName == "left" ? Side::Left : Side::Right;
  if (action == "forward") {
    run.forward(side);
  } else if (action == "backward") {
    run.backward(side);
  } else if (action == "to-breakpoint") {
    run.toBreakpoint(side);
  } else if (action == "to-end") {
    run.toEnd(side);
  } else if (action == "start") {
    run.toStart(side);
  } else {
    throw badRequest("unknown action '" + action + "'");
  }
}

} // namespace

Json ServiceError::body() const {
  Json j;
  j["error"] = what();
  j["reason"] = reason_;
  for (const auto& [k, v] : details_.items()) {
    j[k] = v;
  }
  return j;
}

ServiceConfig ServiceConfig::withEnvironment() const {
  auto c = *this;
  try {
    if (const auto v = env("QDD_HOST")) {
      c.host = *v;
    }
    if (const auto v = env("QDD_PORT")) {
      c.port = std::stoi(*v);
    }
    if (const auto v = env("QDD_DENSE_THRESHOLD")) {
      c.denseThreshold = std::stoul(*v);
    }
    if (const auto v = env("QDD_SESSION_TTL")) {
      c.sessionTtl = std::chrono::seconds(std::stoll(*v));
    }
  } catch (const std::logic_error&) {
    throw std::invalid_argument("malformed service environment variable");
  }
  c.engine = c.engine.withEnvironment();
  return c;
}

SessionManager::SessionManager(ServiceConfig config, std::function<Clock::time_point()> now)
    : config_(std::move(config)), now_(std::move(now)), idRng_(std::random_device{}()) {
  config_.engine.validate();
}

SessionManager::~SessionManager() = default;

std::string SessionManager::newId() {
  std::array<char, 17> buf{};
  do {
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(idRng_()));
  } while (sessions_.contains(buf.data()) || expired_.contains(buf.data()));
  return buf.data();
}

std::size_t SessionManager::expireIdle() {
  const std::scoped_lock lock(mutex_);
  const auto now = now_();
  std::size_t dropped = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (now - it->second->lastTouched > config_.sessionTtl) {
      expired_.insert(it->first);
      expiredOrder_.push_back(it->first);
      if (expiredOrder_.size() > MAX_REMEMBERED_EXPIRED) {
        expired_.erase(expiredOrder_.front());
        expiredOrder_.pop_front();
      }
      it = sessions_.erase(it);
      ++dropped;
    } else {
      ++it;
    }
  }
  return dropped;
}

std::size_t SessionManager::size() const {
  const std::scoped_lock lock(mutex_);
  return sessions_.size();
}

std::shared_ptr<Session> SessionManager::acquire(const std::string& id) {
  expireIdle();
  const std::scoped_lock lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    if (expired_.contains(id)) {
      throw ServiceError(404, "expired", "session '" + id + "' expired");
    }
    throw ServiceError(404, "unknown_session", "no session '" + id + "'");
  }
  it->second->lastTouched = now_();
  return it->second;
}

Json SessionManager::create(const Json& request) {
  expireIdle();
  const auto mode = requireString(request, "mode");
  const auto engine = engineFor(config_, request);
  auto session = std::make_shared<Session>();
  if (mode == "simulate") {
    rejectUnsupportedFile(request, "filename");
    auto circuit = parseSource(request, "qasm");
    if (circuit.numQubits() == 0) {
      throw badRequest("circuit has no qubits");
    }
    session->mode = Mode::Simulate;
    session->sim = std::make_unique<sim::SimulationRun>(std::move(circuit), engine);
  } else if (mode == "verify") {
    rejectUnsupportedFile(request, "filename1");
    rejectUnsupportedFile(request, "filename2");
    auto left = parseSource(request, "qasm1");
    auto right = parseSource(request, "qasm2");
    session->mode = Mode::Verify;
    try {
      session->verify = std::make_unique<ec::VerificationRun>(std::move(left), std::move(right), engine);
    } catch (const qc::NotInvertibleError& e) {
      throw ServiceError(422, "not_unitary", e.what());
    } catch (const ec::QubitCountMismatchError& e) {
      throw ServiceError(422, "qubit_count_mismatch", e.what());
    } catch (const std::invalid_argument& e) {
      throw badRequest(e.what());
    }
  } else {
    throw badRequest("mode must be 'simulate' or 'verify'");
  }

  {
    const std::scoped_lock lock(mutex_);
    session->id = newId();
    session->lastTouched = now_();
    sessions_.emplace(session->id, session);
  }
  const std::scoped_lock lock(session->mutex);
  return view(*session, config_.denseThreshold);
}

Json SessionManager::step(const std::string& id, const Json& request) {
  const auto session = acquire(id);
  const std::scoped_lock lock(session->mutex);
  const auto action = requireString(request, "action");
  if (session->mode == Mode::Simulate) {
    const auto side = request.contains("side") ? requireString(request, "side") : std::string("single");
    stepSimulation(*session->sim, side, action);
  } else {
    stepVerification(*session->verify, requireString(request, "side"), action);
  }
  return view(*session, config_.denseThreshold);
}

Json SessionManager::decide(const std::string& id, const Json& request) {
  const auto session = acquire(id);
  const std::scoped_lock lock(session->mutex);
  if (session->mode != Mode::Simulate || !session->sim->pending()) {
    throw ServiceError(409, "no_pending_decision", "no decision is pending");
  }
  const auto& outcome = requireField(request, "outcome");
  auto& run = *session->sim;
  if (outcome.is_string() && outcome.get<std::string>() == "random") {
    run.resolveDecisionRandom();
  } else if (outcome.is_number_integer() && (outcome.get<int>() == 0 || outcome.get<int>() == 1)) {
    try {
      run.resolveDecision(outcome.get<int>());
    } catch (const std::invalid_argument& e) {
      throw badRequest(e.what());
    }
  } else {
    throw badRequest("outcome must be 0, 1 or \"random\"");
  }
  return view(*session, config_.denseThreshold);
}

Json SessionManager::state(const std::string& id) {
  const auto session = acquire(id);
  const std::scoped_lock lock(session->mutex);
  return view(*session, config_.denseThreshold);
}

void SessionManager::remove(const std::string& id) {
  expireIdle();
  const std::scoped_lock lock(mutex_);
  if (sessions_.erase(id) == 0) {
    if (expired_.contains(id)) {
      throw ServiceError(404, "expired", "session '" + id + "' expired");
    }
    throw ServiceError(404, "unknown_session", "no session '" + id + "'");
  }
}

} // namespace service
