#include "edgebulk/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "edgebulk/errors.hpp"
#include "edgebulk/stats.hpp"

namespace eb {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void StatsReport::add(double E, const std::string& statistic, const std::string& quantile, double value,
                      std::optional<bool> pass) {
  rows.push_back({E, statistic, quantile, value, pass});
}

void StatsReport::add_summary(double E, const std::string& statistic, const std::vector<double>& samples) {
  add(E, statistic, "median", median(samples));
  add(E, statistic, "p05", quantile(samples, 0.05));
  add(E, statistic, "p95", quantile(samples, 0.95));
}

double StatsReport::value(double E, const std::string& statistic, const std::string& q) const {
  for (const auto& r : rows) {
    if (r.E == E && r.statistic == statistic && r.quantile == q) return r.value;
  }
  throw RangeError("report has no row " + statistic + "/" + q + " at E=" + fmt(E));
}

bool StatsReport::all_pass() const {
  for (const auto& r : rows) {
    if (r.pass && !*r.pass) return false;
  }
  return true;
}

std::size_t StatsReport::checks() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.pass.has_value();
  return n;
}

std::string StatsReport::csv() const {
  std::string out = "config_hash,E,statistic,quantile,value,pass\n";
  for (const auto& r : rows) {
    out += config_hash + "," + fmt(r.E) + "," + r.statistic + "," + r.quantile + "," + fmt(r.value) + ",";
    if (r.pass) out += *r.pass ? "1" : "0";
    out += "\n";
  }
  return out;
}

nlohmann::json StatsReport::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["metadata"] = metadata;
  j["all_pass"] = all_pass();
  auto& arr = j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row{{"config_hash", config_hash}, {"E", r.E},         {"statistic", r.statistic},
                       {"quantile", r.quantile},     {"value", r.value}};
    row["pass"] = r.pass ? nlohmann::json(*r.pass) : nlohmann::json(nullptr);
    arr.push_back(std::move(row));
  }
  return j;
}

void StatsReport::write(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream(std::filesystem::path(dir) / "report.csv") << csv();
  std::ofstream(std::filesystem::path(dir) / "report.json") << to_json().dump(2) << "\n";
}

}  // namespace eb
