#include "fdl/harness/report.hpp"

#include <fstream>
#include <stdexcept>

#include "fdl/harness/emit.hpp"

namespace fdl::harness {

bool ExperimentReport::passed() const {
  if (error) return false;
  for (const Check& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

void ExperimentReport::expect_at_most(std::string name, double measured, double threshold, std::string detail) {
  checks.push_back({std::move(name), measured <= threshold, measured, threshold, "<=", std::move(detail)});
}

void ExperimentReport::expect_at_least(std::string name, double measured, double threshold, std::string detail) {
  checks.push_back({std::move(name), measured >= threshold, measured, threshold, ">=", std::move(detail)});
}

void ExperimentReport::expect(std::string name, bool ok, double measured, double threshold, std::string relation,
                              std::string detail) {
  checks.push_back({std::move(name), ok, measured, threshold, std::move(relation), std::move(detail)});
}

nlohmann::json to_json(const ExperimentReport& report, bool with_timing) {
  nlohmann::json checks = nlohmann::json::array();
  for (const Check& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"status", c.passed ? "PASS" : "FAIL"},
                      {"measured", format_real(c.measured)},
                      {"threshold", format_real(c.threshold)},
                      {"relation", c.relation},
                      {"detail", c.detail}});
  }
  nlohmann::json artifacts = nlohmann::json::array();
  for (const Artifact& a : report.artifacts) {
    artifacts.push_back({{"file", a.file}, {"hash", a.hash}, {"bytes", a.bytes}});
  }
  nlohmann::json doc = {{"config", nlohmann::json::parse(serialize(report.config))},
                        {"checks", checks},
                        {"artifacts", artifacts},
                        {"passed", report.passed()}};
  doc["error"] = report.error ? nlohmann::json(*report.error) : nlohmann::json(nullptr);
  if (with_timing) doc["wall_time"] = report.wall_time;
  return doc;
}

std::string summary(const ExperimentReport& report) {
  std::string out;
  for (const Check& c : report.checks) {
    out += c.passed ? "PASS " : "FAIL ";
    out += c.name + ": measured " + format_real(c.measured) + " " + c.relation + " " + format_real(c.threshold);
    if (!c.detail.empty()) out += " (" + c.detail + ")";
    out += '\n';
  }
  if (report.error) out += "ERROR " + *report.error + '\n';
  return out;
}

ArtifactSink::ArtifactSink(std::filesystem::path dir, ExperimentReport& report)
    : dir_(std::move(dir)), report_(report) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

void ArtifactSink::write(const std::string& file, const std::string& content) {
  report_.artifacts.push_back({file, fnv1a_hex(content), content.size()});
  if (dir_.empty()) return;
  std::ofstream out(dir_ / file, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write artifact " + (dir_ / file).string());
}

void ArtifactSink::write_json(const std::string& file, const nlohmann::json& doc) {
  write(file, doc.dump(2) + "\n");
}

void ArtifactSink::finish() {
  if (dir_.empty()) return;
  const std::string report_text = to_json(report_).dump(2) + "\n";
  {
    std::ofstream out(dir_ / "report.json", std::ios::binary);
    out << report_text;
  }
  std::string manifest;
  for (const Artifact& a : report_.artifacts) {
    manifest += a.hash + "  " + std::to_string(a.bytes) + "  " + a.file + "\n";
  }
  manifest += fnv1a_hex(report_text) + "  " + std::to_string(report_text.size()) + "  report.json\n";
  std::ofstream out(dir_ / "manifest.txt", std::ios::binary);
  out << manifest;
  if (!out) throw std::runtime_error("cannot write manifest in " + dir_.string());
}

}  // namespace fdl::harness
