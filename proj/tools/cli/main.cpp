#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdl/harness/config.hpp"
#include "fdl/harness/experiments.hpp"
#include "fdl/harness/report.hpp"

namespace {

constexpr int kChecksFailed = 1;
constexpr int kBadInput = 2;

int finish(const fdl::harness::ExperimentReport& report, bool as_json) {
  if (as_json) {
    std::cout << fdl::harness::to_json(report).dump(2) << '\n';
  } else {
    std::cout << fdl::harness::summary(report);
  }
  return report.passed() ? 0 : kChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments with the fractional discrete Laplacian"};
  std::vector<std::string> positional;
  std::string config_file;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool as_json = false;
  bool list = false;
  app.add_option("experiment", positional, "experiment name (or self-test) followed by key=value pairs");
  app.add_option("--config", config_file, "flat JSON object or key=value file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "directory for CSV/JSON artifacts and the manifest");
  app.add_option("--seed", seed, "seed for every random draw");
  app.add_flag("--json", as_json, "print the report as JSON instead of PASS/FAIL lines");
  app.add_flag("--list", list, "list the experiments and exit");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& name : fdl::harness::experiment_names()) std::cout << name << '\n';
    std::cout << "self-test\n";
    return 0;
  }

  try {
    if (!positional.empty() && positional.front() == "self-test") {
      fdl::harness::SelfTestOptions options;
      if (seed) options.seed = *seed;
      return finish(fdl::harness::self_test(options), as_json);
    }

    fdl::harness::ExperimentConfig config;
    if (!config_file.empty()) config = fdl::harness::load_config(config_file);
    std::string experiment = config.experiment;
    std::vector<std::string> pairs;
    for (const std::string& arg : positional) {
      if (arg.find('=') == std::string::npos && experiment.empty() && pairs.empty()) {
        experiment = arg;
      } else if (arg.find('=') == std::string::npos && pairs.empty() && arg == experiment) {
        continue;
      } else {
        pairs.push_back(arg);
      }
    }
    if (experiment.empty()) {
      std::cerr << "error: no experiment given (try --list)\n";
      return kBadInput;
    }
    fdl::harness::ExperimentConfig overrides = fdl::harness::parse_arguments(experiment, pairs);
    if (!out_dir.empty()) overrides.output_dir = out_dir;
    if (seed) overrides.seed = seed;
    config = fdl::harness::merge(std::move(config), overrides);

    const auto report = fdl::harness::run(config);
    return finish(report, as_json);
  } catch (const fdl::harness::validation_error& e) {
    std::cerr << "invalid configuration:\n";
    for (const auto& [key, message] : e.problems()) std::cerr << "  " << key << ": " << message << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
}
