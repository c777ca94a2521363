// senseme-sim: deterministic school of simulated child devices.

#include <iostream>

#include "CLI11.hpp"
#include "senseme/error.hpp"
#include "senseme/roster.hpp"
#include "senseme/simulator.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sense-me device simulator"};
  senseme::sim::SimConfig cfg;
  std::string children;
  std::string timetable;
  std::string overrides;
  std::string start = "2024-03-04";
  std::string dry_run;
  std::vector<std::string> anomalies;

  app.add_option("--seed", cfg.seed, "RNG seed")->required();
  app.add_option("--children", children, "child profiles JSON")->required()->check(CLI::ExistingFile);
  app.add_option("--timetable", timetable, "timetable JSON")->required()->check(CLI::ExistingFile);
  app.add_option("--overrides", overrides, "schedule overrides JSON")->check(CLI::ExistingFile);
  app.add_option("--days", cfg.days, "number of school days")->required()->check(CLI::NonNegativeNumber);
  app.add_option("--start", start, "first simulated date (YYYY-MM-DD)");
  app.add_option("--server", cfg.server_url, "service base URL, e.g. http://127.0.0.1:8080");
  app.add_option("--token", cfg.token, "device bearer token")->envname("SENSEME_DEVICE_TOKEN");
  app.add_option("--compress", cfg.compress, "simulated seconds per wall second (0: no pacing)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--anomaly", anomalies, "child=ID,date=YYYY-MM-DD,kind=verbal,factor=0");
  app.add_option("--dry-run", dry_run, "write batches to DIR/batches.ndjson instead of posting");
  app.add_option("--p-meet", cfg.p_meet, "same-cluster meeting probability per break epoch")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--p-cross", cfg.p_cross, "cross-cluster meeting probability per break epoch")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--sample-rate", cfg.sample_rate, "audio samples per second");
  CLI11_PARSE(app, argc, argv);

  if (dry_run.empty() && cfg.server_url.empty()) {
    std::cerr << "either --server or --dry-run is required\n";
    return 2;
  }

  try {
    cfg.children = senseme::sim::parse_profiles(senseme::read_file(children));
    cfg.timetable = senseme::schedule::parse_timetable(senseme::read_file(timetable));
    if (!overrides.empty()) {
      cfg.overrides = senseme::schedule::parse_overrides(senseme::read_file(overrides));
    }
    cfg.start = senseme::require_date(start);
    for (const auto& a : anomalies) cfg.anomalies.push_back(senseme::sim::parse_anomaly(a));
    // validates anomaly children up front
    senseme::sim::inject_anomaly(cfg.anomalies, cfg.children, cfg.start);
    cfg.dry_run_dir = dry_run;
    return senseme::sim::run(cfg, std::cerr);
  } catch (const senseme::Error& e) {
    std::cerr << senseme::to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
