#include "fdl/harness/emit.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace fdl::harness {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc()) throw std::runtime_error("format_real: conversion failed");
  return {buffer.data(), end};
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[hash & 0xf];
    hash >>= 4;
  }
  return out;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row() {
  rows_.emplace_back();
  return *this;
}

CsvTable& CsvTable::cell(double value) {
  rows_.back().push_back(format_real(value));
  return *this;
}

CsvTable& CsvTable::cell(long value) {
  rows_.back().push_back(std::to_string(value));
  return *this;
}

CsvTable& CsvTable::cell(bool value) {
  rows_.back().emplace_back(value ? "true" : "false");
  return *this;
}

CsvTable& CsvTable::cell(std::string_view value) {
  if (value.find_first_of(",\n\"") != std::string_view::npos) {
    std::string quoted = "\"";
    for (char c : value) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    rows_.back().push_back(quoted + "\"");
  } else {
    rows_.back().emplace_back(value);
  }
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) {
    if (r.size() != header_.size()) throw std::logic_error("CsvTable: row width differs from header");
    line(r);
  }
  return out;
}

nlohmann::json to_json(const TorusFunction& v) {
  return {{"d", v.d()}, {"N", v.N()}, {"h", v.h()},
          {"values", std::vector<double>(v.values().begin(), v.values().end())}};
}

namespace {

nlohmann::json sparse_json(const SparseValues& values) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [site, value] : values) {
    nlohmann::json entry(site);
    entry.push_back(value);
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace

nlohmann::json to_json(const LatticeFunction& u) {
  nlohmann::json out = {{"d", u.params().d()}, {"h", u.params().h()}, {"support", sparse_json(u.sparse_part())}};
  if (const auto* step = std::get_if<StepProfile>(&u.shape())) {
    nlohmann::json axial = nlohmann::json::array();
    for (const auto& [x, value] : step->axial) axial.push_back({x, value});
    out["profile"] = {{"axis", step->axis},   {"cutoff", step->cutoff}, {"left", step->left},
                      {"right", step->right}, {"axial", axial}};
  } else {
    out["profile"] = nullptr;
  }
  return out;
}

nlohmann::json to_json(const Certificate& c) {
  nlohmann::json out = {{"residual_sup", c.residual_sup},
                        {"u_norm", c.u_norm},
                        {"tolerance", c.tolerance},
                        {"s", c.params.s()},
                        {"h", c.params.h()},
                        {"d", c.params.d()},
                        {"constrained", c.constrained},
                        {"support", c.support},
                        {"claim", c.claim},
                        {"accepted", c.accepted},
                        {"multiple_solutions", c.multiple_solutions}};
  out["potential_bound"] = c.potential_bound ? nlohmann::json(*c.potential_bound) : nlohmann::json(nullptr);
  return out;
}

}  // namespace fdl::harness
