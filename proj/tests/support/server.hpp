#pragma once

// In-process HTTP server over a wiki, bound to a free loopback port.

#include <httplib.h>

#include <thread>

#include "cnlwiki/service/service.hpp"
#include "json.hpp"

namespace testing {

class LiveServer {
 public:
  explicit LiveServer(cnlwiki::wiki::Wiki& wiki) {
    cnlwiki::service::mountRoutes(server_, wiki);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LiveServer() {
    server_.stop();
    thread_.join();
  }
  LiveServer(const LiveServer&) = delete;
  LiveServer& operator=(const LiveServer&) = delete;

  [[nodiscard]] int port() const { return port_; }
  [[nodiscard]] httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

struct Reply {
  int status = 0;
  nlohmann::json body;
};

inline Reply reply(const httplib::Result& r) {
  if (!r) return {0, nullptr};
  return {r->status, r->body.empty() ? nlohmann::json() : nlohmann::json::parse(r->body)};
}

inline Reply post(httplib::Client& c, const std::string& path, const nlohmann::json& body) {
  return reply(c.Post(path, body.dump(), "application/json"));
}

inline Reply put(httplib::Client& c, const std::string& path, const nlohmann::json& body) {
  return reply(c.Put(path, body.dump(), "application/json"));
}

inline Reply get(httplib::Client& c, const std::string& path) { return reply(c.Get(path)); }

}  // namespace testing
