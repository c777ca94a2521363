// senseme-logtool: offline checks over an event log.
//
//   senseme-logtool verify LOG   stream-validate every record
//   senseme-logtool audit LOG    scan for forbidden (raw audio / location) keys

#include <iostream>

#include "CLI11.hpp"
#include "senseme/derived_state.hpp"
#include "senseme/error.hpp"
#include "senseme/event_log.hpp"
#include "senseme/privacy.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sense-me event log tool"};
  app.require_subcommand(1);
  std::string path;
  auto* verify = app.add_subcommand("verify", "decode, sequence-check and fold every record");
  verify->add_option("log", path)->required()->check(CLI::ExistingFile);
  auto* audit = app.add_subcommand("audit", "report lines carrying forbidden keys");
  audit->add_option("log", path)->required()->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      senseme::DerivedState state;
      auto n = senseme::read_log(path, [&](const senseme::EventRecord& r) { state.apply(r); });
      std::cout << "ok: " << n << " records\n";
      return 0;
    }
    auto report = senseme::privacy::audit_file(path);
    for (const auto& f : report.findings) {
      std::cout << "line " << f.line << ": "
                << (f.key.empty() ? std::string("unparseable") : "forbidden key '" + f.key + "'")
                << "\n";
    }
    std::cout << (report.clean() ? "clean" : "VIOLATIONS") << ": " << report.lines << " lines\n";
    return report.clean() ? 0 : 1;
  } catch (const senseme::CorruptLog& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
