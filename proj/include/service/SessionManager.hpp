#pragma once

#include "dd/EngineConfig.hpp"

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace service {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  /// Largest qubit count for which a StateView carries the dense amplitudes.
  std::size_t denseThreshold = 6;
  std::chrono::seconds sessionTtl{30 * 60};
  std::string corsOrigin = "*";
  dd::EngineConfig engine{};

  /// Applies QDD_HOST, QDD_PORT, QDD_DENSE_THRESHOLD, QDD_SESSION_TTL
  /// (seconds) and the engine variables if set.
  ServiceConfig withEnvironment() const;
};

/// Error reported to the client as an HTTP status plus a JSON body.
class ServiceError : public std::runtime_error {
public:
  ServiceError(int status, std::string reason, const std::string& message, Json details = Json::object())
      : std::runtime_error(message), status_(status), reason_(std::move(reason)), details_(std::move(details)) {}

  [[nodiscard]] int status() const { return status_; }
  [[nodiscard]] const std::string& reason() const { return reason_; }
  [[nodiscard]] Json body() const;

private:
  int status_;
  std::string reason_;
  Json details_;
};

struct Session;

/// In-memory store of interactive simulation and verification sessions.
/// Thread-safe; requests on one session are serialized by its own mutex
/// while different sessions proceed in parallel.
class SessionManager {
public:
  explicit SessionManager(ServiceConfig config = {}, std::function<Clock::time_point()> now = Clock::now);
  ~SessionManager();

  SessionManager(const SessionManager&) = delete;
  SessionManager& operator=(const SessionManager&) = delete;

  /// Body: {mode: "simulate", qasm, filename?, options?} or
  /// {mode: "verify", qasm1, qasm2, filename1?, filename2?, options?}.
  /// Returns the initial StateView, which carries the new sessionId.
  Json create(const Json& request);
  /// Body: {side: "single"|"left"|"right", action: "forward"|"backward"|
  /// "to-breakpoint"|"to-end"|"start"}.
  Json step(const std::string& id, const Json& request);
  /// Body: {outcome: 0|1|"random"}.
  Json decide(const std::string& id, const Json& request);
  Json state(const std::string& id);
  void remove(const std::string& id);

  /// Drops sessions idle for longer than the TTL. Called on every request.
  std::size_t expireIdle();
  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] const ServiceConfig& config() const { return config_; }

private:
  std::shared_ptr<Session> acquire(const std::string& id);
  std::string newId();

  ServiceConfig config_;
  std::function<Clock::time_point()> now_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
  std::unordered_set<std::string> expired_;
  std::deque<std::string> expiredOrder_;
  std::mt19937_64 idRng_;
};

} // namespace service
