#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fdl/counterexamples.hpp"
#include "fdl/lattice.hpp"
#include "fdl/torus.hpp"

namespace fdl::harness {

/// Shortest decimal text that reads back to the same double.
std::string format_real(double value);

/// 64-bit FNV-1a of a byte string, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row();
  CsvTable& cell(double value);
  CsvTable& cell(long value);
  CsvTable& cell(int value) { return cell(static_cast<long>(value)); }
  CsvTable& cell(std::size_t value) { return cell(static_cast<long>(value)); }
  CsvTable& cell(bool value);
  CsvTable& cell(std::string_view value);
  CsvTable& cell(const char* value) { return cell(std::string_view(value)); }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_.size(); }
  /// Comma separated, '\n' line endings, header first. Throws if a row has the wrong width.
  [[nodiscard]] std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

nlohmann::json to_json(const TorusFunction& v);
nlohmann::json to_json(const LatticeFunction& u);
nlohmann::json to_json(const Certificate& c);

}  // namespace fdl::harness
