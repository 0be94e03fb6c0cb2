#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdl/harness/config.hpp"

namespace fdl::harness {

struct Check {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  // how measured is compared with threshold, e.g. "<="
  std::string detail;
};

struct Artifact {
  std::string file;  // relative to the output directory
  std::string hash;  // FNV-1a 64
  std::size_t bytes = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  double wall_time = 0.0;
  std::vector<Check> checks;
  std::vector<Artifact> artifacts;
  std::optional<std::string> error;  // a module error that stopped the run

  [[nodiscard]] bool passed() const;

  void expect_at_most(std::string name, double measured, double threshold, std::string detail = {});
  void expect_at_least(std::string name, double measured, double threshold, std::string detail = {});
  /// A yes/no check; measured and threshold are recorded as given.
  void expect(std::string name, bool ok, double measured, double threshold, std::string relation,
              std::string detail = {});
};

/// Deterministic part only (no wall time) unless `with_timing`.
nlohmann::json to_json(const ExperimentReport& report, bool with_timing = true);

/// One PASS/FAIL line per check, then the error if any.
std::string summary(const ExperimentReport& report);

/// Writes artifacts into the output directory and keeps the manifest in step. With an empty
/// directory nothing touches the disk, but hashes are still recorded.
class ArtifactSink {
 public:
  ArtifactSink(std::filesystem::path dir, ExperimentReport& report);

  void write(const std::string& file, const std::string& content);
  void write_json(const std::string& file, const nlohmann::json& doc);

  /// Writes report.json and manifest.txt (the manifest also covers report.json).
  void finish();

 private:
  std::filesystem::path dir_;
  ExperimentReport& report_;
};

}  // namespace fdl::harness
