#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace eb {

struct ReportRow {
  double E;  // 0 for rows that pool all shifts
  std::string statistic;
  std::string quantile;  // "median", "p05", "p95", "value", ...
  double value;
  std::optional<bool> pass;  // empty for descriptive rows
};

struct StatsReport {
  std::string command;
  std::string config_hash;
  std::vector<ReportRow> rows;
  nlohmann::json metadata = nlohmann::json::object();

  void add(double E, const std::string& statistic, const std::string& quantile, double value,
           std::optional<bool> pass = std::nullopt);
  // median, p05 and p95 rows of a sample.
  void add_summary(double E, const std::string& statistic, const std::vector<double>& samples);
  // Value of the first row matching (E, statistic, quantile); throws when absent.
  double value(double E, const std::string& statistic, const std::string& quantile) const;
  bool all_pass() const;
  std::size_t checks() const;

  // Deterministic CSV body with 17 significant digits.
  std::string csv() const;
  nlohmann::json to_json() const;
  void write(const std::string& dir) const;
};

}  // namespace eb
