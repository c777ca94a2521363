// senseme-server: HTTP/JSON awareness service over an append-only event log.

#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "httplib.h"
#include "senseme/error.hpp"
#include "senseme/http_api.hpp"
#include "senseme/service.hpp"

namespace {

httplib::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sense-me awareness service"};
  std::string log_path;
  std::string timetable;
  std::string overrides;
  std::string roster;
  std::string listen = "127.0.0.1:8080";
  std::string token_file;
  std::string console_dir;
  bool no_sync = false;
  app.add_option("--log-path", log_path, "event log file (created if missing)")->required();
  app.add_option("--timetable", timetable, "timetable JSON")->required()->check(CLI::ExistingFile);
  app.add_option("--overrides", overrides, "schedule overrides JSON")->check(CLI::ExistingFile);
  app.add_option("--roster", roster, "children/devices roster JSON")->required()->check(CLI::ExistingFile);
  app.add_option("--listen", listen, "host:port to bind");
  app.add_option("--token-file", token_file, "role tokens JSON")->required()->check(CLI::ExistingFile);
  app.add_option("--console-dir", console_dir, "static console bundle served at /console");
  app.add_flag("--no-sync", no_sync, "skip fdatasync after each append");
  CLI11_PARSE(app, argc, argv);

  auto colon = listen.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "--listen must be host:port\n";
    return 2;
  }
  const std::string host = listen.substr(0, colon);
  const int port = std::stoi(listen.substr(colon + 1));

  try {
    auto ctx = senseme::load_context(timetable, roster, overrides);
    auto tokens = senseme::parse_tokens(senseme::read_file(token_file));
    senseme::AwarenessService service(std::move(ctx), log_path, {.sync = !no_sync, .clock = {}});
    std::cerr << "replayed " << service.head_seq() << " records from " << log_path << "\n";

    httplib::Server server;
    senseme::http::mount(server, service, tokens, console_dir);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "listening on " << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
      std::cerr << "cannot bind " << listen << "\n";
      return 1;
    }
  } catch (const senseme::Error& e) {
    std::cerr << senseme::to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
