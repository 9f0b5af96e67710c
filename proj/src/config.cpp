#include "edgebulk/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "edgebulk/errors.hpp"

namespace eb {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  if (v == "inf" || v == "infinity") return INFINITY;
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw ConfigError("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: " + v);
  }
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size() || v.front() == '-') throw ConfigError("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a nonnegative integer: " + v);
  }
}

std::vector<std::string> split(const std::string& v, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(to_double(key, item));
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

// Complex points written re:im and separated by ';'.
std::vector<cplx> to_cplx_list(const std::string& key, const std::string& v) {
  std::vector<cplx> out;
  for (const auto& item : split(v, ';')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw ConfigError("config key '" + key + "': expected re:im, got " + item);
    out.emplace_back(to_double(key, parts[0]), to_double(key, parts[1]));
  }
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  const std::string& v = value;
  if (key == "beta") params.beta = to_double(key, v);
  else if (key == "a") params.a = to_double(key, v);
  else if (key == "E_list") E_list = to_list(key, v);
  else if (key == "seed") seed = to_uint(key, v);
  else if (key == "paths") paths = to_uint(key, v);
  else if (key == "alpha") coupling.alpha = to_double(key, v);
  else if (key == "delta") coupling.delta = to_double(key, v);
  else if (key == "phase_cap") phase_cap = to_double(key, v);
  else if (key == "max_step") max_step = to_double(key, v);
  else if (key == "bump_lo") bump_lo = to_double(key, v);
  else if (key == "bump_hi") bump_hi = to_double(key, v);
  else if (key == "bump_component") bump_component = static_cast<int>(to_uint(key, v));
  else if (key == "window_lo") window_lo = to_double(key, v);
  else if (key == "window_hi") window_hi = to_double(key, v);
  else if (key == "core_fraction") core_fraction = to_double(key, v);
  else if (key == "resolution") resolution = to_double(key, v);
  else if (key == "eps_schedule") eps_schedule = to_list(key, v);
  else if (key == "z_grid") z_grid = to_cplx_list(key, v);
  else if (key == "lp_tol") lp_tol = to_double(key, v);
  else if (key == "sine_horizon") sine_horizon = to_double(key, v);
  else if (key == "w_threshold") w_threshold = to_double(key, v);
  else if (key == "phi_horizon") phi_horizon = to_double(key, v);
  else if (key == "lambda") lambda = to_double(key, v);
  else if (key == "T") T = to_double(key, v);
  else if (key == "phase_paths") phase_paths = to_uint(key, v);
  else if (key == "envelope_exponent") envelope_exponent = to_double(key, v);
  else if (key == "envelope_quantile") envelope_quantile = to_double(key, v);
  else if (key == "slope_max") slope_max = to_double(key, v);
  else if (key == "ratio_max") ratio_max = to_double(key, v);
  else if (key == "ks_max") ks_max = to_double(key, v);
  else if (key == "mass_count") mass_count = to_uint(key, v);
  else if (key == "phase_ks_max") phase_ks_max = to_double(key, v);
  else if (key == "slope_tol") slope_tol = to_double(key, v);
  else if (key == "envelope_fraction") envelope_fraction = to_double(key, v);
  else if (key == "herglotz_tol") herglotz_tol = to_double(key, v);
  else if (key == "exploratory_bessel") exploratory_bessel = to_uint(key, v) != 0;
  else if (key == "output_dir") output_dir = v;
  else throw ConfigError("unknown config key '" + key + "'");
}

void ExperimentConfig::validate() const {
  params.validate();
  coupling.validate();
  if (E_list.empty()) throw ConfigError("E_list must not be empty");
  for (std::size_t i = 0; i < E_list.size(); ++i) {
    if (!(E_list[i] > 1)) throw ConfigError("E_list entries must exceed 1");
    if (i > 0 && !(E_list[i] > E_list[i - 1])) throw ConfigError("E_list must be strictly increasing");
  }
  if (paths < 1) throw ConfigError("paths must be at least 1");
  if (!(phase_cap > 0)) throw ConfigError("phase_cap must be positive");
  if (max_step < 0) throw ConfigError("max_step must be nonnegative");
  if (!(bump_lo < bump_hi) || bump_lo < 0) throw ConfigError("bump support must satisfy 0 <= bump_lo < bump_hi");
  if (bump_component != 0 && bump_component != 1) throw ConfigError("bump_component must be 0 or 1");
  if (!(window_lo < window_hi)) throw ConfigError("spectral window must satisfy window_lo < window_hi");
  if (!(core_fraction > 0 && core_fraction <= 1)) throw ConfigError("core_fraction must lie in (0, 1]");
  if (!(resolution > 0)) throw ConfigError("resolution must be positive");
  if (eps_schedule.size() < 2) throw ConfigError("eps_schedule needs at least two entries");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > 0) || (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1]))) {
      throw ConfigError("eps_schedule must be positive and decreasing");
    }
  }
  for (const cplx& z : z_grid) {
    if (!(z.imag() > 0)) throw ConfigError("z_grid points must lie in the upper half-plane");
  }
  if (!(lambda > 0)) throw ConfigError("lambda must be positive");
  if (!(T >= 10)) throw ConfigError("T must be at least 10");
  if (!(envelope_quantile > 0 && envelope_quantile < 1)) throw ConfigError("envelope_quantile must lie in (0, 1)");
  if (!(sine_horizon > 0) || !(phi_horizon > 0) || !(w_threshold > 0)) {
    throw ConfigError("horizons and thresholds must be positive");
  }
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
    return s;
  };
  std::string zs;
  for (std::size_t i = 0; i < z_grid.size(); ++i) {
    zs += (i ? ";" : "") + fmt(z_grid[i].real()) + ":" + fmt(z_grid[i].imag());
  }
  os << "beta=" << fmt(params.beta) << "\n"
     << "a=" << fmt(params.a) << "\n"
     << "E_list=" << list(E_list) << "\n"
     << "seed=" << seed << "\n"
     << "paths=" << paths << "\n"
     << "alpha=" << fmt(coupling.alpha) << "\n"
     << "delta=" << fmt(coupling.delta) << "\n"
     << "phase_cap=" << fmt(phase_cap) << "\n"
     << "max_step=" << fmt(max_step) << "\n"
     << "bump_lo=" << fmt(bump_lo) << "\n"
     << "bump_hi=" << fmt(bump_hi) << "\n"
     << "bump_component=" << bump_component << "\n"
     << "window_lo=" << fmt(window_lo) << "\n"
     << "window_hi=" << fmt(window_hi) << "\n"
     << "core_fraction=" << fmt(core_fraction) << "\n"
     << "resolution=" << fmt(resolution) << "\n"
     << "eps_schedule=" << list(eps_schedule) << "\n"
     << "z_grid=" << zs << "\n"
     << "lp_tol=" << fmt(lp_tol) << "\n"
     << "sine_horizon=" << fmt(sine_horizon) << "\n"
     << "w_threshold=" << fmt(w_threshold) << "\n"
     << "phi_horizon=" << fmt(phi_horizon) << "\n"
     << "lambda=" << fmt(lambda) << "\n"
     << "T=" << fmt(T) << "\n"
     << "phase_paths=" << phase_paths << "\n"
     << "envelope_exponent=" << fmt(envelope_exponent) << "\n"
     << "envelope_quantile=" << fmt(envelope_quantile) << "\n"
     << "slope_max=" << fmt(slope_max) << "\n"
     << "ratio_max=" << fmt(ratio_max) << "\n"
     << "ks_max=" << fmt(ks_max) << "\n"
     << "mass_count=" << mass_count << "\n"
     << "phase_ks_max=" << fmt(phase_ks_max) << "\n"
     << "slope_tol=" << fmt(slope_tol) << "\n"
     << "envelope_fraction=" << fmt(envelope_fraction) << "\n"
     << "herglotz_tol=" << fmt(herglotz_tol) << "\n"
     << "exploratory_bessel=" << (exploratory_bessel ? 1 : 0) << "\n";
  return os.str();
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ExperimentConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace eb
