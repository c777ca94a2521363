#pragma once

#include <stdexcept>
#include <string>
#include <thread>

#include "httplib.h"
#include "senseme/http_api.hpp"
#include "senseme/roster.hpp"
#include "senseme/service.hpp"

namespace testing {

// The real HTTP API on an ephemeral loopback port, served from a thread.
class LiveServer {
 public:
  LiveServer(senseme::AwarenessService& service, const senseme::Tokens& tokens) : tokens_(tokens) {
    senseme::http::mount(server_, service, tokens_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw std::runtime_error("cannot bind a loopback port");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LiveServer() {
    server_.stop();
    thread_.join();
  }
  LiveServer(const LiveServer&) = delete;
  LiveServer& operator=(const LiveServer&) = delete;

  int port() const { return port_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  httplib::Client client(const std::string& token = {}) const {
    httplib::Client c("127.0.0.1", port_);
    if (!token.empty()) c.set_bearer_token_auth(token);
    c.set_tcp_nodelay(true);
    return c;
  }

 private:
  senseme::Tokens tokens_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace testing
