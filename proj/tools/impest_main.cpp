// Experiment runner: loads a JSON experiment config, runs it on derived
// random substreams, and writes CSV artifacts. Exit codes distinguish config
// errors (2), saturation errors (3), and numerical errors (4).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "impest/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"plug-in and imputation estimators for incomplete-data case studies"};

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::uint64_t replicates = 0;
  unsigned threads = 1;
  bool seed_given = false;
  bool replicates_given = false;

  app.add_option("--config", config_path, "path to the JSON experiment config")->required();
  app.add_option("--seed", seed, "master seed (overrides the config)")
      ->each([&](const std::string&) { seed_given = true; });
  app.add_option("--replicates", replicates, "replicate count (overrides the config)")
      ->each([&](const std::string&) { replicates_given = true; });
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--threads", threads, "worker threads across replicates")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream file(config_path);
    if (!file) {
      std::cerr << "error: cannot open config file " << config_path << "\n";
      return 2;
    }
    impest::experiments::json doc;
    try {
      doc = impest::experiments::json::parse(file);
    } catch (const impest::experiments::json::exception& e) {
      std::cerr << "error: invalid JSON in " << config_path << ": " << e.what() << "\n";
      return 2;
    }

    auto cfg = impest::experiments::parse_config(doc);
    if (seed_given) cfg.seed = seed;
    if (replicates_given) cfg.replicates = replicates;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (cfg.out_dir.empty()) {
      std::cerr << "error: no output directory (set \"out\" in the config or pass --out)\n";
      return 2;
    }

    const auto output = impest::experiments::run_experiment(cfg, threads);
    const auto written = impest::experiments::write_output(output, cfg.out_dir);
    for (const auto& path : written) std::cout << path << "\n";
    return 0;
  } catch (const impest::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const impest::saturation_error& e) {
    std::cerr << "saturation error: " << e.what() << "\n";
    return 3;
  } catch (const impest::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
