#include "senseme/http_api.hpp"

#include <charconv>
#include <initializer_list>

#include "httplib.h"
#include "senseme/error.hpp"

namespace senseme::http {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& msg) {
  send(res, status, {{"error", code}, {"message", msg}});
}

struct Unauthorized {};

std::optional<Role> bearer_role(const httplib::Request& req, const Tokens& tokens) {
  auto header = req.get_header_value("Authorization");
  constexpr std::string_view prefix = "Bearer ";
  if (header.size() <= prefix.size() || header.compare(0, prefix.size(), prefix) != 0) {
    return std::nullopt;
  }
  return tokens.role_for(std::string_view(header).substr(prefix.size()));
}

Role authorize(const httplib::Request& req, const Tokens& tokens, std::initializer_list<Role> allowed) {
  auto role = bearer_role(req, tokens);
  if (!role) throw Unauthorized{};
  for (Role r : allowed) {
    if (r == *role) return r;
  }
  throw Unauthorized{};
}

json body_of(const httplib::Request& req) {
  auto doc = json::parse(req.body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw Error(ErrorCode::SchemaError, "request body is not valid JSON");
  return doc;
}

std::string required_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) {
    throw Error(ErrorCode::SchemaError, std::string("missing query parameter '") + name + "'");
  }
  return req.get_param_value(name);
}

template <typename Int>
Int int_param(const std::string& text, const char* name) {
  Int value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::SchemaError, std::string("query parameter '") + name +
                                            "' must be an integer");
  }
  return value;
}

// Runs a handler, turning domain errors into status codes.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Unauthorized&) {
      send_error(res, 401, "Unauthorized", "missing token or token not valid for this route");
    } catch (const Error& e) {
      send_error(res, http_status(e.code()), to_string(e.code()), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "Internal", e.what());
    }
  };
}

}  // namespace

void mount(httplib::Server& server, AwarenessService& service, const Tokens& tokens,
           const std::string& console_dir) {
  const std::string api = "/api/v1";
  auto* svc = &service;
  const Tokens* tok = &tokens;

  server.Get(api + "/meta", guarded([svc](const auto&, auto& res) { send(res, 200, svc->meta()); }));

  server.Post(api + "/ingest/features", guarded([svc, tok](const auto& req, auto& res) {
    authorize(req, *tok, {Role::device});
    auto ack = svc->ingest_features(body_of(req));
    send(res, 200, {{"seq", ack.seq}});
  }));

  server.Post(api + "/ingest/proximity", guarded([svc, tok](const auto& req, auto& res) {
    authorize(req, *tok, {Role::device});
    auto ack = svc->ingest_proximity(body_of(req));
    send(res, 200, {{"seq", ack.seq}});
  }));

  server.Post(api + "/selfreport", guarded([svc, tok](const auto& req, auto& res) {
    authorize(req, *tok, {Role::device});
    auto ack = svc->submit_selfreport(body_of(req));
    send(res, 200, {{"seq", ack.seq}});
  }));

  server.Get(api + R"(/children/([^/]+)/cues)", guarded([svc, tok](const auto& req, auto& res) {
    authorize(req, *tok, {Role::teacher, Role::parent});
    send(res, 200, svc->get_cues(req.matches[1].str(), required_param(req, "date")));
  }));

  server.Post(api + R"(/cues/([^/]+)/annotations)", guarded([svc, tok](const auto& req, auto& res) {
    authorize(req, *tok, {Role::teacher});
    auto ack = svc->annotate_cue(req.matches[1].str(), body_of(req));
    send(res, 200, {{"seq", ack.seq}, {"id", ack.id}});
  }));

  server.Post(api + "/messages", guarded([svc, tok](const auto& req, auto& res) {
    Role role = authorize(req, *tok, {Role::teacher, Role::parent});
    auto body = body_of(req);
    // the token decides who is speaking
    if (body.is_object() && body.contains("sender_role") && body["sender_role"].is_string() &&
        body["sender_role"].template get<std::string>() != to_string(role) &&
        role_from(body["sender_role"].template get<std::string>())) {
      throw Unauthorized{};
    }
    auto ack = svc->post_message(body);
    send(res, 200, {{"seq", ack.seq}, {"id", ack.id}});
  }));

  server.Get(api + "/messages", guarded([svc, tok](const auto& req, auto& res) {
    authorize(req, *tok, {Role::teacher, Role::parent});
    std::optional<std::uint64_t> since;
    if (req.has_param("since")) {
      since = int_param<std::uint64_t>(req.get_param_value("since"), "since");
    }
    send(res, 200, svc->get_messages(required_param(req, "child"), since));
  }));

  server.Get(api + R"(/children/([^/]+)/location)", guarded([svc, tok](const auto& req, auto& res) {
    authorize(req, *tok, {Role::teacher, Role::parent});
    auto at = int_param<Timestamp>(required_param(req, "at"), "at");
    send(res, 200, svc->get_location(req.matches[1].str(), at));
  }));

  server.Get(api + R"(/children/([^/]+)/selfreports)",
             guarded([svc, tok](const auto& req, auto& res) {
               authorize(req, *tok, {Role::teacher, Role::parent});
               send(res, 200,
                    svc->get_selfreports(req.matches[1].str(), required_param(req, "date")));
             }));

  server.Get(api + "/graph", guarded([svc, tok](const auto& req, auto& res) {
    authorize(req, *tok, {Role::teacher});
    send(res, 200, svc->get_graph(required_param(req, "date")));
  }));

  server.set_tcp_nodelay(true);
  if (!console_dir.empty()) server.set_mount_point("/console", console_dir);
}

}  // namespace senseme::http
