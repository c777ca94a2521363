#pragma once

#include <string>

#include "senseme/roster.hpp"
#include "senseme/service.hpp"

namespace httplib {
class Server;
}

namespace senseme::http {

// Registers every /api/v1 route on `server`. Error bodies are
// {"error": "<ErrorCode>", "message": "..."} with 400 for schema/date errors,
// 401 for a missing token or one whose role may not use the route, 404 for
// unknown entities and 422 for privacy violations. When `console_dir` is
// non-empty its files are served under /console.
void mount(httplib::Server& server, AwarenessService& service, const Tokens& tokens,
           const std::string& console_dir = {});

}  // namespace senseme::http
