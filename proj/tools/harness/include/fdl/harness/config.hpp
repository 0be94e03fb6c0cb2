#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fdl::harness {

/// Raised when a configuration fails validation. `fields` lists every offending key.
class validation_error : public std::invalid_argument {
 public:
  explicit validation_error(std::vector<std::pair<std::string, std::string>> problems);
  validation_error(std::string key, std::string message);

  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& problems() const noexcept {
    return problems_;
  }
  [[nodiscard]] std::vector<std::string> fields() const;

 private:
  std::vector<std::pair<std::string, std::string>> problems_;
};

struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, std::string> params;
  std::filesystem::path output_dir;  // empty: no artifacts are written
  std::optional<std::uint64_t> seed;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Names of all experiments known to the harness.
const std::vector<std::string>& experiment_names();

/// Builds a config from `experiment key=value ...`.
ExperimentConfig parse_arguments(std::string_view experiment, const std::vector<std::string>& pairs);

/// Parses a flat document: either a JSON object of scalars or key=value lines ('#' comments).
/// The keys `experiment`, `out` and `seed` fill the dedicated fields.
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& file);

/// Overlays `top` onto `base`: its params replace equally named ones, and its experiment,
/// output directory and seed win when present.
ExperimentConfig merge(ExperimentConfig base, const ExperimentConfig& top);

/// Canonical flat JSON with sorted keys and string values.
std::string serialize(const ExperimentConfig& config);

/// Typed access to the params of one config. Problems are collected rather than thrown so
/// that `finish` can report every offending field at once.
class ParamReader {
 public:
  explicit ParamReader(const ExperimentConfig& config);

  double real(const std::string& key, double fallback);
  long integer(const std::string& key, long fallback);
  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback);
  std::vector<long> integers(const std::string& key, const std::vector<long>& fallback);
  /// Points written as `1,0;0,2` (coordinates by commas, points by semicolons).
  std::vector<std::vector<long>> points(const std::string& key,
                                        const std::vector<std::vector<long>>& fallback);
  std::uint64_t seed(std::uint64_t fallback);

  /// Records a domain problem for `key` unless `ok`.
  void require(bool ok, const std::string& key, const std::string& message);

  /// Throws validation_error if any problem was recorded or any key was never read.
  void finish();

 private:
  const std::string* lookup(const std::string& key);

  const ExperimentConfig& config_;
  std::map<std::string, bool> used_;
  std::vector<std::pair<std::string, std::string>> problems_;
};

}  // namespace fdl::harness
