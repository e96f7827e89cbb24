#pragma once

#include "service/SessionManager.hpp"

#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace service {

/// HTTP/JSON front end of a SessionManager:
///   POST   /sessions
///   POST   /sessions/{id}/step
///   POST   /sessions/{id}/decision
///   GET    /sessions/{id}/state
///   DELETE /sessions/{id}
class HttpServer {
public:
  explicit HttpServer(SessionManager& sessions);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds to the configured host and port (0 picks a free port) and
  /// returns the bound port, or -1 on failure.
  int bind();
  /// Serves until `stop` is called. Requires a successful `bind`.
  bool listen();
  void stop();
  void waitUntilReady() const;

private:
  SessionManager& sessions_;
  std::unique_ptr<httplib::Server> server_;
};

} // namespace service
