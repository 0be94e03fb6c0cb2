#include "fdl/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fdl/harness/emit.hpp"

namespace fdl::harness {

namespace {

std::string describe(const std::vector<std::pair<std::string, std::string>>& problems) {
  std::string text = "invalid configuration:";
  for (const auto& [key, message] : problems) text += "\n  " + key + ": " + message;
  return text;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <class T>
std::optional<T> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

void assign(ExperimentConfig& config, const std::string& key, const std::string& value) {
  if (key == "experiment") {
    config.experiment = value;
  } else if (key == "out") {
    config.output_dir = value;
  } else if (key == "seed") {
    const auto seed = parse_number<std::uint64_t>(value);
    if (!seed) throw validation_error("seed", "expected an unsigned 64-bit integer, got '" + value + "'");
    config.seed = *seed;
  } else {
    config.params[key] = value;
  }
}

std::string scalar_text(const nlohmann::json& value, const std::string& key) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_unsigned()) return std::to_string(value.get<std::uint64_t>());
  if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
  if (value.is_number_float()) return format_real(value.get<double>());
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  throw validation_error(key, "configuration values must be scalars");
}

}  // namespace

validation_error::validation_error(std::vector<std::pair<std::string, std::string>> problems)
    : std::invalid_argument(describe(problems)), problems_(std::move(problems)) {}

validation_error::validation_error(std::string key, std::string message)
    : validation_error(std::vector<std::pair<std::string, std::string>>{{std::move(key), std::move(message)}}) {}

std::vector<std::string> validation_error::fields() const {
  std::vector<std::string> out;
  for (const auto& entry : problems_) {
    if (std::find(out.begin(), out.end(), entry.first) == out.end()) out.push_back(entry.first);
  }
  return out;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "kernel-dump",     "apply",          "ucp-lattice",          "ucp-torus",
      "slab-1d",         "slab-2d",        "transference",         "extension-trace",
      "carleman-commutator", "carleman-probe", "boundary-bulk",    "inverse-sweep"};
  return names;
}

ExperimentConfig parse_arguments(std::string_view experiment, const std::vector<std::string>& pairs) {
  ExperimentConfig config;
  config.experiment = std::string(experiment);
  std::vector<std::pair<std::string, std::string>> problems;
  for (const std::string& pair : pairs) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos || eq == 0) {
      problems.emplace_back(pair, "expected key=value");
      continue;
    }
    try {
      assign(config, std::string(trim(std::string_view(pair).substr(0, eq))),
             std::string(trim(std::string_view(pair).substr(eq + 1))));
    } catch (const validation_error& e) {
      problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    }
  }
  if (!problems.empty()) throw validation_error(std::move(problems));
  return config;
}

ExperimentConfig parse_config_text(std::string_view text) {
  ExperimentConfig config;
  const std::string_view body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw validation_error("config", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw validation_error("config", "expected a flat JSON object");
    for (const auto& [key, value] : doc.items()) {
      if (value.is_null()) continue;
      assign(config, key, scalar_text(value, key));
    }
    return config;
  }
  std::vector<std::pair<std::string, std::string>> problems;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      problems.emplace_back("line " + std::to_string(line_no), "expected key=value");
      continue;
    }
    assign(config, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
  }
  if (!problems.empty()) throw validation_error(std::move(problems));
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw validation_error("config", "cannot open " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

ExperimentConfig merge(ExperimentConfig base, const ExperimentConfig& top) {
  if (!top.experiment.empty()) base.experiment = top.experiment;
  if (!top.output_dir.empty()) base.output_dir = top.output_dir;
  if (top.seed) base.seed = top.seed;
  for (const auto& [key, value] : top.params) base.params[key] = value;
  return base;
}

std::string serialize(const ExperimentConfig& config) {
  nlohmann::json doc = nlohmann::json::object();
  doc["experiment"] = config.experiment;
  if (!config.output_dir.empty()) doc["out"] = config.output_dir.string();
  if (config.seed) doc["seed"] = std::to_string(*config.seed);
  for (const auto& [key, value] : config.params) doc[key] = value;
  return doc.dump(2) + "\n";
}

ParamReader::ParamReader(const ExperimentConfig& config) : config_(config) {
  for (const auto& entry : config.params) used_[entry.first] = false;
}

const std::string* ParamReader::lookup(const std::string& key) {
  const auto it = config_.params.find(key);
  if (it == config_.params.end()) return nullptr;
  used_[key] = true;
  return &it->second;
}

double ParamReader::real(const std::string& key, double fallback) {
  const std::string* text = lookup(key);
  if (text == nullptr) return fallback;
  const auto value = parse_number<double>(*text);
  if (!value) {
    problems_.emplace_back(key, "expected a real number, got '" + *text + "'");
    return fallback;
  }
  return *value;
}

long ParamReader::integer(const std::string& key, long fallback) {
  const std::string* text = lookup(key);
  if (text == nullptr) return fallback;
  const auto value = parse_number<long>(*text);
  if (!value) {
    problems_.emplace_back(key, "expected an integer, got '" + *text + "'");
    return fallback;
  }
  return *value;
}

std::vector<double> ParamReader::reals(const std::string& key, const std::vector<double>& fallback) {
  const std::string* text = lookup(key);
  if (text == nullptr) return fallback;
  std::vector<double> out;
  for (std::string_view part : split(*text, ',')) {
    const auto value = parse_number<double>(part);
    if (!value) {
      problems_.emplace_back(key, "expected a comma-separated list of reals, got '" + *text + "'");
      return fallback;
    }
    out.push_back(*value);
  }
  return out;
}

std::vector<long> ParamReader::integers(const std::string& key, const std::vector<long>& fallback) {
  const std::string* text = lookup(key);
  if (text == nullptr) return fallback;
  std::vector<long> out;
  for (std::string_view part : split(*text, ',')) {
    const auto value = parse_number<long>(part);
    if (!value) {
      problems_.emplace_back(key, "expected a comma-separated list of integers, got '" + *text + "'");
      return fallback;
    }
    out.push_back(*value);
  }
  return out;
}

std::vector<std::vector<long>> ParamReader::points(const std::string& key,
                                                   const std::vector<std::vector<long>>& fallback) {
  const std::string* text = lookup(key);
  if (text == nullptr) return fallback;
  std::vector<std::vector<long>> out;
  for (std::string_view point : split(*text, ';')) {
    std::vector<long> coords;
    for (std::string_view part : split(point, ',')) {
      const auto value = parse_number<long>(part);
      if (!value) {
        problems_.emplace_back(key, "expected points like '0,1;2,3', got '" + *text + "'");
        return fallback;
      }
      coords.push_back(*value);
    }
    out.push_back(std::move(coords));
  }
  return out;
}

std::uint64_t ParamReader::seed(std::uint64_t fallback) {
  if (config_.seed) {
    lookup("seed");
    return *config_.seed;
  }
  const std::string* text = lookup("seed");
  if (text == nullptr) return fallback;
  const auto value = parse_number<std::uint64_t>(*text);
  if (!value) {
    problems_.emplace_back("seed", "expected an unsigned 64-bit integer, got '" + *text + "'");
    return fallback;
  }
  return *value;
}

void ParamReader::require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) problems_.emplace_back(key, message);
}

void ParamReader::finish() {
  for (const auto& [key, used] : used_) {
    if (!used) problems_.emplace_back(key, "unknown parameter for experiment '" + config_.experiment + "'");
  }
  if (!problems_.empty()) throw validation_error(problems_);
}

}  // namespace fdl::harness
