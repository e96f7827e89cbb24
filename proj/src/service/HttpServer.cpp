#include "service/HttpServer.hpp"

#include <httplib.h>

namespace service {

namespace {

constexpr const char* JSON_TYPE = "application/json";

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), JSON_TYPE);
}

Json parseBody(const httplib::Request& req) {
  if (req.body.empty()) {
    return Json::object();
  }
  try {
    return Json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ServiceError(400, "bad_request", std::string("malformed JSON body: ") + e.what());
  }
}

template <class F> auto guarded(F&& handler) {
  return [handler = std::forward<F>(handler)](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const ServiceError& e) {
      reply(res, e.status(), e.body());
    } catch (const std::exception& e) {
      reply(res, 500, Json{{"error", e.what()}, {"reason", "internal"}});
    }
  };
}

} // namespace

HttpServer::HttpServer(SessionManager& sessions) : sessions_(sessions), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;
  const auto origin = sessions_.config().corsOrigin;
  s.set_default_headers({{"Access-Control-Allow-Origin", origin},
                         {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                         {"Access-Control-Allow-Headers", "Content-Type"}});
  s.Options(R"(/sessions.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  s.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
           reply(res, 201, sessions_.create(parseBody(req)));
         }));
  s.Post(R"(/sessions/([^/]+)/step)", guarded([this](const httplib::Request& req, httplib::Response& res) {
           reply(res, 200, sessions_.step(req.matches[1], parseBody(req)));
         }));
  s.Post(R"(/sessions/([^/]+)/decision)", guarded([this](const httplib::Request& req, httplib::Response& res) {
           reply(res, 200, sessions_.decide(req.matches[1], parseBody(req)));
         }));
  s.Get(R"(/sessions/([^/]+)/state)", guarded([this](const httplib::Request& req, httplib::Response& res) {
          reply(res, 200, sessions_.state(req.matches[1]));
        }));
  s.Delete(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
             sessions_.remove(req.matches[1]);
             res.status = 204;
           }));
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  const auto& c = sessions_.config();
  if (c.port == 0) {
    return server_->bind_to_any_port(c.host);
  }
  return server_->bind_to_port(c.host, c.port) ? c.port : -1;
}

bool HttpServer::listen() { return server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_->is_running()) {
    server_->stop();
  }
}

void HttpServer::waitUntilReady() const { server_->wait_until_ready(); }

} // namespace service
