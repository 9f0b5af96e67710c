#include "edgebulk/experiments.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <numbers>
#include <string>

#include "edgebulk/errors.hpp"
#include "edgebulk/stats.hpp"

namespace eb {

namespace {

constexpr double kPi = std::numbers::pi;

PolarPair polar_prefix(const PolarPair& p, std::size_t last) {
  PolarPair q;
  q.grid = p.grid.prefix(last);
  q.rho.assign(p.rho.begin(), p.rho.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  q.xi.assign(p.xi.begin(), p.xi.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  q.C = p.C;
  return q;
}

FundamentalPair pair_prefix(const FundamentalPair& fp, std::size_t last) {
  FundamentalPair out;
  out.f = polar_prefix(fp.f, last);
  out.g = polar_prefix(fp.g, last);
  out.seed = fp.seed;
  out.noise = RealPath{fp.noise.grid.prefix(last),
                       std::vector<double>(fp.noise.values.begin(),
                                           fp.noise.values.begin() + static_cast<std::ptrdiff_t>(last) + 1)};
  return out;
}

StatsReport new_report(const std::string& command, const ExperimentConfig& cfg) {
  StatsReport r;
  r.command = command;
  r.config_hash = cfg.hash();
  r.metadata["config"] = cfg.canonical();
  r.metadata["seed"] = cfg.seed;
  r.metadata["grid_policy"] = {{"phase_cap", cfg.phase_cap}, {"max_step", cfg.effective_max_step()}};
  r.metadata["build"] = std::string("edgebulk ") + __VERSION__;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  r.metadata["timestamp"] = buf;
  return r;
}

void add_decreasing_check(StatsReport& r, const ExperimentConfig& cfg, const std::string& stat,
                          const std::string& q = "median") {
  if (cfg.E_list.size() < 2) return;
  std::vector<double> v;
  for (double E : cfg.E_list) v.push_back(r.value(E, stat, q));
  const bool ok = strictly_decreasing(v);
  r.add(0.0, stat, q + "_strictly_decreasing", ok ? 1.0 : 0.0, ok);
}

void add_failure_row(StatsReport& r, std::size_t failures, const std::string& first_error) {
  r.add(0.0, "failed_cells", "count", static_cast<double>(failures), failures == 0);
  if (failures > 0) r.metadata["first_failure"] = first_error;
}

// Cell index -> (E index, path).
struct CellIndex {
  std::size_t e;
  std::size_t path;
};
CellIndex cell_of(std::size_t i, std::size_t paths) { return {i / paths, i % paths}; }

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

CoupledPath simulate_coupled_path(const ExperimentConfig& cfg, double E, std::size_t path, double clock_end) {
  CoupledPath cp;
  cp.shift = shift_params(cfg.params, E);
  cp.partition = coupling_partition(cp.shift, cfg.coupling);
  const TimeGrid grid = make_grid(coupling_breaks(cp.partition, clock_end),
                                  bessel_grid_policy(cp.shift, cfg.phase_cap, cfg.effective_max_step()),
                                  TimeScale::log_time);
  const RngSeed noise_seed{cfg.seed, streams::clock_noise, path};
  const RealPath noise = sample_brownian(noise_seed, grid);
  PolarOptions opts;
  opts.phase_cap = cfg.phase_cap;
  cp.pair = fundamental_pair(cfg.params, cp.shift, noise, opts);
  cp.pair.seed = noise_seed;
  cp.coupled = build_coupled_w(noise, cp.pair.g, cp.partition, cp.shift, RngSeed{cfg.seed, streams::fill, path});
  cp.hbm = simulate_hbm(cfg.params.beta, cp.coupled.W);
  return cp;
}

double TestFunction::bump(double t) const {
  if (t <= lo || t >= hi) return 0.0;
  const double x = (2.0 * t - lo - hi) / (hi - lo);
  return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

double vague_statistic(const CoupledPath& cp, const TestFunction& phi) {
  const TimeGrid& grid = cp.pair.f.grid;
  const int c = phi.component;
  // Trapezoid of bump^2 H_cc against native time for one of the two clocks.
  auto integral = [&](double cval, auto&& entry) {
    double acc = 0.0;
    double prev_t = 0.0, prev_v = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = log_time_inverse(grid[k], cval);
      const double b = phi.bump(t);
      const double v = b == 0.0 ? 0.0 : b * b * entry(k);
      if (k > 0) {
        const double dt = std::exp(-grid[k - 1]) * (-std::expm1(-grid.gap(k - 1))) / cval;
        acc += 0.5 * (prev_v + v) * dt;
      }
      prev_t = t;
      prev_v = v;
      if (t >= phi.hi) break;
    }
    (void)prev_t;
    return acc;
  };
  const double ib = integral(cp.shift.c, [&](std::size_t k) {
    const Mat2 m = bessel_matrix(cp.pair, k, cp.shift).full;
    return c == 0 ? m.a : m.d;
  });
  const double ir = integral(1.0, [&](std::size_t k) {
    const Mat2 m = sine_matrix(cp.hbm.x[k], cp.hbm.y[k]);
    return c == 0 ? m.a : m.d;
  });
  return ib - ir;
}

SpectralSystem bessel_spectral_system(const ExperimentConfig& cfg, const CoupledPath& cp, std::size_t path) {
  const BesselParams& params = cfg.params;
  SpectralSystem sys;
  if (params.beta > 2 && params.a >= 1) {
    const std::size_t k_tau = cp.pair.f.grid.find_node(cp.shift.clock_tau());
    if (k_tau == TimeGrid::npos) throw ConfigError("bessel_spectral_system: grid misses the clock of log E");
    const FundamentalPair pre = pair_prefix(cp.pair, k_tau);
    const RealPath B = unshifted_noise(RngSeed{cfg.seed, streams::unshifted, path}, cfg.phi_horizon, 0.01);
    BetaGt2Options opts;
    opts.horizon = cfg.phi_horizon;
    sys.boundary = bessel_right_boundary_beta_gt2(params, cp.shift, pre, B, opts);
    sys.field = std::make_shared<CoefficientMatrixField>(bessel_field(cp.pair, cp.shift, k_tau));
    sys.clock_end = cp.shift.clock_tau();
  } else {
    const std::size_t node = bessel_horizon_node(cp.pair, params, cfg.w_threshold, cp.shift.clock_tau());
    const LcBoundary lc = std::abs(params.a) < 1 ? bessel_right_boundary_lc(cp.pair, params, node)
                                                 : bessel_truncation_boundary(cp.pair, node);
    sys.boundary = lc.data;
    sys.field = std::make_shared<CoefficientMatrixField>(bessel_field(cp.pair, cp.shift, node));
    sys.clock_end = lc.clock;
  }
  return sys;
}

SpectralSystem sine_spectral_system(const HyperbolicPath& hbm, double beta, double horizon) {
  if (!(beta > 0)) throw DomainError("sine_spectral_system: beta must be positive");
  SpectralSystem sys;
  const double h = std::min(horizon, hbm.grid.back());
  sys.field = std::make_shared<CoefficientMatrixField>(sine_field(hbm, log_time_inverse(h, 1.0)));
  sys.boundary = BoundaryData::from_vector({RealPath{hbm.grid, hbm.x}.at(h), 1.0});
  sys.clock_end = h;
  return sys;
}

std::vector<double> certified_eigenvalues(const SpectralSystem& sys, double lo, double hi, double resolution) {
  return eigenvalues(*sys.field, sys.boundary, lo, hi, resolution, JumpPolicy::bisect);
}

PairDiagnostics pair_diagnostics(const FundamentalPair& pair, const ShiftParams& shift) {
  PairDiagnostics d{0.0, 0.0, 0.0};
  const long double target = 0.25L * shift.c * shift.c;
  for (std::size_t k = 0; k < pair.size(); ++k) {
    d.wronskian_sup = std::max(d.wronskian_sup, pair.wronskian_defect(k));
    const BesselMatrix m = bessel_matrix(pair, k, shift);
    const double tr = m.full.trace();
    if (tr > 0) d.rank1_ratio = std::max(d.rank1_ratio, sym_eigenvalues(m.full)[0] / tr);
    d.hyperbolic_det_err = std::max(d.hyperbolic_det_err, static_cast<double>(std::abs(m.hyperbolic.det() - target)));
  }
  return d;
}

double bessel_oracle_error(double a, double E, double eta_max, double phase_cap, double max_step) {
  const BesselParams params{std::numeric_limits<double>::infinity(), a};
  const ShiftParams shift = shift_params(params, E);
  const TimeGrid grid =
      make_grid(0.0, 0.5 * eta_max, bessel_grid_policy(shift, phase_cap, max_step), TimeScale::log_time);
  const RealPath noise = zero_path(grid);
  PolarOptions opts;
  opts.phase_cap = phase_cap;
  const FundamentalPair pair = fundamental_pair(params, shift, noise, opts);
  const double e4 = std::pow(E, 0.25);
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const BesselReference ref = deterministic_bessel_reference(a, E, 2.0 * grid[k]);
    const SolutionValue f = solutions_from_polar(pair.f, shift, noise, params, k);
    const SolutionValue g = solutions_from_polar(pair.g, shift, noise, params, k);
    const double ef = std::hypot(e4 * (f.value - ref.f), (f.derivative - ref.fp) / e4) /
                      std::hypot(e4 * ref.f, ref.fp / e4);
    const double eg = std::hypot(e4 * (g.value - ref.g), (g.derivative - ref.gp) / e4) /
                      std::hypot(e4 * ref.g, ref.gp / e4);
    worst = std::max({worst, ef, eg});
  }
  return worst;
}

// ---- coupling sweep ----

namespace {

struct CouplingCell {
  bool ok = false;
  std::string error;
  double deviation = 0, gbm_lin = 0, gbm_log = 0, rehbm = 0, averaging = 0;
};

std::vector<CouplingCell> coupling_cells(const ExperimentConfig& cfg, unsigned threads) {
  const std::size_t n = cfg.E_list.size() * cfg.paths;
  return parallel_map<CouplingCell>(n, threads, [&](std::size_t i) {
    const CellIndex ci = cell_of(i, cfg.paths);
    CouplingCell cell;
    try {
      const CoupledPath cp = simulate_coupled_path(cfg, cfg.E_list[ci.e], ci.path);
      cell.deviation = deviation_sup(cp.coupled, cp.pair.g, cp.shift, cfg.coupling);
      const GbmComparison g = gbm_compare(cp.pair.g, cp.coupled, cfg.params, cp.shift, cfg.coupling);
      cell.gbm_lin = g.sup_lin;
      cell.gbm_log = g.sup_log;
      cell.rehbm = rehbm_compare(cp.pair, cp.coupled, cfg.params, cp.shift, cfg.coupling);
      const double window_end =
          (1.0 - std::pow(cp.shift.E, -0.5 + cfg.coupling.alpha)) / cp.shift.c;
      cell.averaging = averaging_sup(cp.pair.g, 2, cp.shift, window_end);
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
    return cell;
  });
}

}  // namespace

StatsReport run_coupling_decay(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  StatsReport r = new_report("coupling", cfg);
  const auto cells = coupling_cells(cfg, threads);
  std::size_t failures = 0;
  std::string first;
  const char* names[] = {"deviation_sup", "gbm_sup_lin", "gbm_sup_log", "rehbm_sup", "averaging_sup_k2"};
  std::vector<double> medians_dev;
  for (std::size_t e = 0; e < cfg.E_list.size(); ++e) {
    std::vector<std::vector<double>> v(5);
    for (std::size_t p = 0; p < cfg.paths; ++p) {
      const CouplingCell& c = cells[e * cfg.paths + p];
      if (!c.ok) {
        if (failures++ == 0) first = c.error;
        continue;
      }
      v[0].push_back(c.deviation);
      v[1].push_back(c.gbm_lin);
      v[2].push_back(c.gbm_log);
      v[3].push_back(c.rehbm);
      v[4].push_back(c.averaging);
    }
    if (v[0].empty())
      throw IntegrationError("coupling sweep: every path failed at E=" + std::to_string(cfg.E_list[e]), 0);
    for (int s = 0; s < 5; ++s) r.add_summary(cfg.E_list[e], names[s], v[s]);
    medians_dev.push_back(median(v[0]));
  }
  add_decreasing_check(r, cfg, "deviation_sup");
  add_decreasing_check(r, cfg, "gbm_sup_lin");
  add_decreasing_check(r, cfg, "rehbm_sup");
  add_decreasing_check(r, cfg, "averaging_sup_k2");
  if (cfg.E_list.size() >= 2) {
    for (int s = 0; s < 5; ++s) {
      std::vector<double> m;
      for (double E : cfg.E_list) m.push_back(r.value(E, names[s], "median"));
      const double slope = log_log_slope(cfg.E_list, m);
      if (s == 0) {
        r.add(0.0, names[s], "loglog_slope", slope, slope <= cfg.slope_max);
      } else {
        r.add(0.0, names[s], "loglog_slope", slope);
      }
    }
  }
  add_failure_row(r, failures, first);
  return r;
}

StatsReport run_vague_convergence(const ExperimentConfig& cfg, const TestFunction& phi, unsigned threads) {
  cfg.validate();
  if (phi.component != 0 && phi.component != 1) throw ConfigError("test function component must be 0 or 1");
  for (double E : cfg.E_list) {
    const ShiftParams shift = shift_params(cfg.params, E);
    if (!(phi.lo >= 0) || !(phi.hi <= shift.tau)) {
      throw ConfigError("test function support must lie in [0, tau_E] for every E in the sweep");
    }
  }
  StatsReport r = new_report("vague", cfg);
  const std::size_t n = cfg.E_list.size() * cfg.paths;
  struct Cell {
    bool ok = false;
    std::string error;
    double value = 0;
  };
  const auto cells = parallel_map<Cell>(n, threads, [&](std::size_t i) {
    const CellIndex ci = cell_of(i, cfg.paths);
    Cell c;
    try {
      const CoupledPath cp = simulate_coupled_path(cfg, cfg.E_list[ci.e], ci.path);
      c.value = std::abs(vague_statistic(cp, phi));
      c.ok = true;
    } catch (const std::exception& e) {
      c.error = e.what();
    }
    return c;
  });
  std::size_t failures = 0;
  std::string first;
  for (std::size_t e = 0; e < cfg.E_list.size(); ++e) {
    std::vector<double> v;
    for (std::size_t p = 0; p < cfg.paths; ++p) {
      const Cell& c = cells[e * cfg.paths + p];
      if (c.ok) {
        v.push_back(c.value);
      } else if (failures++ == 0) {
        first = c.error;
      }
    }
    if (v.empty()) throw IntegrationError("vague sweep: every path failed", 0);
    r.add_summary(cfg.E_list[e], "abs_vague_statistic", v);
  }
  add_decreasing_check(r, cfg, "abs_vague_statistic");
  if (cfg.E_list.size() >= 2) {
    const double ratio = r.value(cfg.E_list.back(), "abs_vague_statistic", "median") /
                         r.value(cfg.E_list.front(), "abs_vague_statistic", "median");
    r.add(0.0, "abs_vague_statistic", "median_ratio_last_first", ratio, ratio <= cfg.ratio_max);
  }
  r.metadata["test_function"] = {{"lo", phi.lo}, {"hi", phi.hi}, {"component", phi.component}};
  add_failure_row(r, failures, first);
  return r;
}

StatsReport run_vague_convergence(const ExperimentConfig& cfg, unsigned threads) {
  return run_vague_convergence(cfg, TestFunction{cfg.bump_lo, cfg.bump_hi, cfg.bump_component}, threads);
}

// ---- spectral and Weyl-Titchmarsh sweeps ----

namespace {

struct SpectralCell {
  bool ok = false;
  std::string error;
  std::vector<double> eig_bessel, eig_sine;
  std::vector<cplx> m_bessel, m_sine;
  double herglotz = 0.0;
  std::size_t lp_certified = 0;
};

std::vector<double> lp_schedule(double horizon) {
  std::vector<double> out;
  for (double s = std::max(1.0, horizon - 8.0); s < horizon - 1e-9; s += 1.0) out.push_back(log_time_inverse(s, 1.0));
  out.push_back(log_time_inverse(horizon, 1.0));
  return out;
}

SpectralCell spectral_cell(const ExperimentConfig& cfg, std::size_t e, std::size_t path, bool eig, bool weyl) {
  SpectralCell cell;
  try {
    const double E = cfg.E_list[e];
    const ShiftParams shift = shift_params(cfg.params, E);
    const CoupledPath cp = simulate_coupled_path(cfg, E, path, std::max(cfg.sine_horizon, shift.clock_tau()));
    const SpectralSystem bes = bessel_spectral_system(cfg, cp, path);
    const SpectralSystem sin = sine_spectral_system(cp.hbm, cfg.params.beta, cfg.sine_horizon);
    if (eig) {
      cell.eig_bessel = certified_eigenvalues(bes, cfg.window_lo, cfg.window_hi, cfg.resolution);
      cell.eig_sine = certified_eigenvalues(sin, cfg.window_lo, cfg.window_hi, cfg.resolution);
    }
    if (weyl) {
      const WeylEvaluator mb = weyl_m_limit_circle(bes.field, bes.boundary);
      const bool sine_lc = cfg.params.beta > 2;
      const WeylEvaluator mr_lc = weyl_m_limit_circle(sin.field, sin.boundary);
      const auto schedule = lp_schedule(sin.clock_end);
      for (const cplx& z : cfg.z_grid) {
        const cplx b = mb(z);
        cplx s;
        if (sine_lc) {
          s = mr_lc(z);
        } else {
          const LimitPointValue lp = weyl_m_limit_point(*sin.field, {0.0, 0.5 * kPi}, schedule, z, cfg.lp_tol);
          s = lp.value;
          cell.lp_certified += lp.certified;
        }
        cell.m_bessel.push_back(b);
        cell.m_sine.push_back(s);
        cell.herglotz = std::max({cell.herglotz, -b.imag(), -s.imag()});
      }
    }
    cell.ok = true;
  } catch (const std::exception& ex) {
    cell.error = ex.what();
  }
  return cell;
}

std::vector<SpectralCell> spectral_cells(const ExperimentConfig& cfg, unsigned threads, bool eig, bool weyl) {
  const std::size_t n = cfg.E_list.size() * cfg.paths;
  return parallel_map<SpectralCell>(n, threads, [&](std::size_t i) {
    const CellIndex ci = cell_of(i, cfg.paths);
    return spectral_cell(cfg, ci.e, ci.path, eig, weyl);
  });
}

// Hausdorff distance restricted to the core: points of each set inside the core
// against the whole other set. An empty partner counts as the window width.
double core_hausdorff(const std::vector<double>& a, const std::vector<double>& b, double lo, double hi,
                      double width) {
  auto directed = [&](const std::vector<double>& from, const std::vector<double>& to) {
    double d = 0.0;
    for (double x : from) {
      if (x < lo || x > hi) continue;
      double best = width;
      for (double y : to) best = std::min(best, std::abs(x - y));
      d = std::max(d, best);
    }
    return d;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace

StatsReport run_spectral_convergence(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  StatsReport r = new_report("spectra", cfg);
  const auto cells = spectral_cells(cfg, threads, true, false);
  const double width = cfg.window_hi - cfg.window_lo;
  const double mid = 0.5 * (cfg.window_lo + cfg.window_hi);
  const double core_lo = mid - 0.5 * cfg.core_fraction * width, core_hi = mid + 0.5 * cfg.core_fraction * width;
  std::size_t failures = 0;
  std::string first;
  for (std::size_t e = 0; e < cfg.E_list.size(); ++e) {
    std::vector<double> gaps_b, gaps_s, haus, count_b, count_s;
    for (std::size_t p = 0; p < cfg.paths; ++p) {
      const SpectralCell& c = cells[e * cfg.paths + p];
      if (!c.ok) {
        if (failures++ == 0) first = c.error;
        continue;
      }
      const auto gb = nearest_neighbor_gaps(c.eig_bessel, core_lo, core_hi);
      const auto gs = nearest_neighbor_gaps(c.eig_sine, core_lo, core_hi);
      gaps_b.insert(gaps_b.end(), gb.begin(), gb.end());
      gaps_s.insert(gaps_s.end(), gs.begin(), gs.end());
      haus.push_back(core_hausdorff(c.eig_bessel, c.eig_sine, core_lo, core_hi, width));
      count_b.push_back(static_cast<double>(c.eig_bessel.size()));
      count_s.push_back(static_cast<double>(c.eig_sine.size()));
    }
    if (haus.empty()) throw IntegrationError("spectral sweep: every path failed", 0);
    const double E = cfg.E_list[e];
    r.add(E, "spacing_ks", "value", gaps_b.empty() || gaps_s.empty() ? 1.0 : ks_statistic(gaps_b, gaps_s));
    r.add_summary(E, "hausdorff_core", haus);
    r.add(E, "eigenvalue_count_bessel", "mean", mean(count_b));
    r.add(E, "eigenvalue_count_sine", "mean", mean(count_s));
    if (!gaps_s.empty()) r.add(E, "sine_core_spacing", "mean", mean(gaps_s));
  }
  add_decreasing_check(r, cfg, "spacing_ks", "value");
  add_decreasing_check(r, cfg, "hausdorff_core");
  r.metadata["sine_horizon_clock"] = cfg.sine_horizon;
  r.metadata["sine_boundary"] = "x at the horizon (estimate of Re B(inf)); truncation vector when beta <= 2";
  add_failure_row(r, failures, first);
  return r;
}

StatsReport run_wt_convergence(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  StatsReport r = new_report("weyl", cfg);
  const auto cells = spectral_cells(cfg, threads, false, true);
  std::size_t failures = 0;
  std::string first;
  double herglotz = 0.0;
  for (std::size_t e = 0; e < cfg.E_list.size(); ++e) {
    std::vector<double> diff;
    std::size_t certified = 0, evaluated = 0;
    for (std::size_t p = 0; p < cfg.paths; ++p) {
      const SpectralCell& c = cells[e * cfg.paths + p];
      if (!c.ok) {
        if (failures++ == 0) first = c.error;
        continue;
      }
      double d = 0.0;
      for (std::size_t j = 0; j < c.m_bessel.size(); ++j) d = std::max(d, std::abs(c.m_bessel[j] - c.m_sine[j]));
      diff.push_back(d);
      herglotz = std::max(herglotz, c.herglotz);
      certified += c.lp_certified;
      evaluated += c.m_sine.size();
    }
    if (diff.empty()) throw IntegrationError("weyl sweep: every path failed", 0);
    r.add_summary(cfg.E_list[e], "max_z_abs_m_diff", diff);
    if (!(cfg.params.beta > 2)) {
      r.add(cfg.E_list[e], "sine_lp_certified_fraction", "value",
            static_cast<double>(certified) / static_cast<double>(evaluated));
    }
  }
  add_decreasing_check(r, cfg, "max_z_abs_m_diff");
  r.add(0.0, "herglotz_violation", "max", herglotz, herglotz <= cfg.herglotz_tol);
  add_failure_row(r, failures, first);
  return r;
}

// ---- asymptotics ----

StatsReport run_asymptotics(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  StatsReport r = new_report("asymptotics", cfg);
  const BesselParams& params = cfg.params;
  const double ms = cfg.effective_max_step();
  const TimeGrid grid = make_grid(1.0, cfg.T, reversed_grid_policy(cfg.lambda, cfg.phase_cap, ms, 0.25 * ms));
  const double lin = 0.5 * params.inv_beta() - 0.5 * params.a;
  const ReversedInit init = reversed_initial(cfg.lambda, 1.0, 0.0);
  const std::size_t n = std::max(2 * cfg.paths, cfg.phase_paths);
  struct Cell {
    double slope = 0, envelope = 0, phase = 0;
  };
  const auto cells = parallel_map<Cell>(n, threads, [&](std::size_t i) {
    const RealPath noise = sample_brownian(RngSeed{cfg.seed, streams::reversed, i}, grid);
    const ReversedPolar rp = integrate_reversed_polar(params, cfg.lambda, init, noise);
    Cell c;
    std::vector<double> dr(rp.r.size());
    for (std::size_t k = 0; k < dr.size(); ++k) dr[k] = rp.r[k] - rp.r[0];
    c.slope = ls_slope(grid.nodes(), dr);
    for (std::size_t k = 0; k < dr.size(); ++k) {
      const double t = grid[k];
      const double X = dr[k] - lin * t;
      c.envelope = std::max(c.envelope, std::abs(X) / (1.0 + std::pow(t, cfg.envelope_exponent)));
    }
    const double turns = rp.xi.back() / (2.0 * kPi);
    c.phase = turns - std::floor(turns);
    return c;
  });
  std::vector<double> slopes, eval_env, calib_env, phases;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < cfg.paths) {
      slopes.push_back(cells[i].slope);
      eval_env.push_back(cells[i].envelope);
    } else if (i < 2 * cfg.paths) {
      calib_env.push_back(cells[i].envelope);
    }
    if (i < cfg.phase_paths) phases.push_back(cells[i].phase);
  }
  const double mslope = mean(slopes);
  r.add(0.0, "r_slope", "mean", mslope, std::abs(mslope - lin) <= cfg.slope_tol);
  r.add(0.0, "r_slope", "expected", lin);
  r.add_summary(0.0, "r_slope", slopes);
  const double C = quantile(calib_env, cfg.envelope_quantile);
  std::size_t inside = 0;
  for (double v : eval_env) inside += v <= C;
  const double frac = static_cast<double>(inside) / static_cast<double>(eval_env.size());
  r.add(0.0, "envelope_constant", "value", C);
  r.add(0.0, "envelope_fraction", "value", frac, frac >= cfg.envelope_fraction);
  const double ks = ks_statistic(phases, [](double u) { return std::clamp(u, 0.0, 1.0); });
  r.add(0.0, "phase_uniform_ks", "value", ks, ks <= cfg.phase_ks_max);
  r.metadata["initial_data"] = "f(-1) = 1, f'(-1) = 0";
  r.metadata["envelope"] = "C calibrated as a quantile over an independent block of paths";
  return r;
}

// ---- Gamma masses ----

StatsReport run_gamma_masses(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  if (!(cfg.params.beta > 2)) throw ConfigError("gamma-masses requires beta > 2");
  StatsReport r = new_report("gamma-masses", cfg);
  const double beta = cfg.params.beta;
  const TimeGrid grid = make_grid(0.0, cfg.sine_horizon, GridPolicy{cfg.effective_max_step(), INFINITY, {}, 0.0},
                                  TimeScale::log_time);
  std::vector<double> masses;
  std::size_t used_paths = 0;
  for (std::size_t batch = 0; masses.size() < cfg.mass_count; ++batch) {
    if (batch >= 50) throw IntegrationError("gamma-masses: too few atoms in the window", 0);
    const auto atoms = parallel_map<std::vector<double>>(cfg.paths, threads, [&](std::size_t i) {
      const std::size_t path = batch * cfg.paths + i;
      const ComplexPath W = sample_complex_brownian(RngSeed{cfg.seed, streams::sine_only, path}, grid);
      const SpectralSystem sys = sine_spectral_system(simulate_hbm(beta, W), beta, cfg.sine_horizon);
      const SpectralMeasure mu =
          spectral_measure(sys.field, sys.boundary, cfg.window_lo, cfg.window_hi, cfg.resolution, cfg.eps_schedule,
                           JumpPolicy::bisect);
      std::vector<double> m;
      for (const auto& a : mu.atoms) m.push_back(a.mass);
      return m;
    });
    for (const auto& m : atoms) {
      if (masses.size() >= cfg.mass_count) break;
      ++used_paths;
      for (double x : m) {
        if (masses.size() < cfg.mass_count) masses.push_back(x);
      }
    }
  }
  const double shape = 0.5 * beta, scale = 2.0 / shape;
  const double ks = ks_statistic(masses, [&](double x) { return gamma_cdf(x, shape, scale); });
  bool positive = true;
  for (double m : masses) positive = positive && m > 0;
  r.add(0.0, "sine_mass_gamma_ks", "value", ks, ks <= cfg.ks_max);
  r.add(0.0, "sine_mass", "mean", mean(masses));
  r.add(0.0, "sine_mass_all_positive", "value", positive ? 1.0 : 0.0, positive);
  r.add(0.0, "sine_mass_count", "value", static_cast<double>(masses.size()));
  r.add(0.0, "sine_paths_used", "value", static_cast<double>(used_paths));
  r.metadata["target"] = {{"shape", shape}, {"scale", scale}};

  if (cfg.exploratory_bessel) {
    // Open question: no pass flag, labelled exploratory.
    const double E = cfg.E_list.back();
    const auto atoms = parallel_map<std::vector<double>>(cfg.paths, threads, [&](std::size_t p) {
      std::vector<double> m;
      try {
        const ShiftParams shift = shift_params(cfg.params, E);
        const CoupledPath cp = simulate_coupled_path(cfg, E, p, std::max(cfg.sine_horizon, shift.clock_tau()));
        const SpectralSystem sys = bessel_spectral_system(cfg, cp, p);
        const SpectralMeasure mu = spectral_measure(sys.field, sys.boundary, cfg.window_lo, cfg.window_hi,
                                                    cfg.resolution, cfg.eps_schedule, JumpPolicy::bisect);
        for (const auto& a : mu.atoms) m.push_back(a.mass);
      } catch (const std::exception&) {
        m.push_back(nan());
      }
      return m;
    });
    std::vector<double> bm;
    std::size_t failed = 0;
    for (const auto& m : atoms) {
      for (double x : m) {
        if (std::isnan(x)) {
          ++failed;
        } else {
          bm.push_back(x);
        }
      }
    }
    if (!bm.empty()) {
      r.add(E, "exploratory_bessel_mass_gamma_ks", "value",
            ks_statistic(bm, [&](double x) { return gamma_cdf(x, shape, scale); }));
      r.add(E, "exploratory_bessel_mass", "mean", mean(bm));
    }
    r.add(E, "exploratory_bessel_mass_count", "value", static_cast<double>(bm.size()));
    r.add(E, "exploratory_bessel_failed_paths", "value", static_cast<double>(failed));
    r.metadata["exploratory"] = "Bessel spectral masses against the same Gamma law; descriptive only";
  }
  return r;
}

// ---- selftest ----

StatsReport run_selftest(const ExperimentConfig& cfg) {
  StatsReport r = new_report("selftest", cfg);
  // Free system H = I on [0, pi].
  CoefficientMatrixField free;
  free.t = {0.0, kPi};
  free.dt = {kPi};
  free.H = {Mat2::identity(), Mat2::identity()};
  auto free_ptr = std::make_shared<const CoefficientMatrixField>(free);
  const BoundaryData e1 = BoundaryData::from_angle(0.0);
  const auto ev = eigenvalues(free, e1, -5.5, 5.5, 0.05);
  double ev_err = ev.size() == 11 ? 0.0 : 1.0;
  for (std::size_t i = 0; i < ev.size() && ev.size() == 11; ++i) {
    ev_err = std::max(ev_err, std::abs(ev[i] - (static_cast<double>(i) - 5.0)));
  }
  r.add(0.0, "free_eigenvalues_max_error", "value", ev_err, ev_err <= 1e-8);
  const WeylEvaluator m_free = weyl_m_limit_circle(free_ptr, e1);
  double mass_err = 0.0;
  for (double x : ev)
    mass_err = std::max(mass_err, std::abs(stieltjes_atom(m_free, x, cfg.eps_schedule).mass - 1 / kPi));
  r.add(0.0, "free_masses_max_error", "value", mass_err, mass_err <= 1e-4);
  const cplx mi = m_free(cplx(0, 1));
  const double mi_err = std::abs(mi - cplx(0.0, 1.0 / std::tanh(kPi)));
  r.add(0.0, "free_m_at_i_error", "value", mi_err, mi_err <= 1e-10);
  const auto empty = eigenvalues(free, e1, 0.2, 0.8, 0.05);
  r.add(0.0, "free_empty_window_count", "value", static_cast<double>(empty.size()), empty.empty());

  // Free half line: m(i) = i.
  CoefficientMatrixField half;
  for (int k = 0; k <= 40; ++k) {
    half.t.push_back(k);
    half.H.push_back(Mat2::identity());
    if (k > 0) half.dt.push_back(1.0);
  }
  std::vector<double> sched;
  for (int b = 2; b <= 40; b += 2) sched.push_back(b);
  const LimitPointValue lp = weyl_m_limit_point(half, {0.0, 0.5 * kPi}, sched, cplx(0, 1));
  const double lp_err = std::abs(lp.value - cplx(0, 1));
  r.add(0.0, "half_line_m_at_i_error", "value", lp_err, lp.certified && lp_err <= 1e-6);

  // Stieltjes fixtures.
  const double l0 = 0.7;
  const double m1 = stieltjes_atom([&](cplx z) { return 1.0 / (l0 - z); }, l0, cfg.eps_schedule).mass;
  r.add(0.0, "stieltjes_single_atom_error", "value", std::abs(m1 - 1.0), std::abs(m1 - 1.0) <= 1e-10);
  const double m2 = stieltjes_atom([](cplx z) { return -std::cos(kPi * z) / std::sin(kPi * z); }, 3.0,
                                   cfg.eps_schedule).mass;
  r.add(0.0, "stieltjes_cot_error", "value", std::abs(m2 - 1 / kPi), std::abs(m2 - 1 / kPi) <= 1e-4);
  const double m3 = stieltjes_atom([](cplx z) { return z; }, 1.3, cfg.eps_schedule).mass;
  r.add(0.0, "stieltjes_no_atom", "value", m3, m3 <= 1e-10);

  // beta = infinity Bessel oracle.
  double oracle = 0.0;
  for (double a : {0.0, 0.5, 1.0}) oracle = std::max(oracle, bessel_oracle_error(a, 100.0, 3.0, 0.05, 0.001));
  r.add(0.0, "bessel_oracle_rel_error", "max", oracle, oracle <= 1e-3);

  // Sine matrix algebra.
  const Mat2 R = sine_matrix(1.0, 1.0);
  const double rerr = std::abs(R.a - 0.5) + std::abs(R.b + 0.5) + std::abs(R.d - 1.0) + std::abs(R.det() - 0.25);
  r.add(0.0, "sine_matrix_error", "value", rerr, rerr <= 1e-14);

  // KS fixtures.
  const double ks_pt = ks_statistic(std::vector<double>{0.0}, [](double u) { return std::clamp(u, 0.0, 1.0); });
  r.add(0.0, "ks_point_mass_uniform", "value", ks_pt, std::abs(ks_pt - 1.0) <= 1e-15);
  const double ks_dis = ks_statistic(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6});
  r.add(0.0, "ks_disjoint", "value", ks_dis, ks_dis == 1.0);

  // Herglotz fixtures.
  const std::vector<cplx> zs{{0, 1}, {1, 1}, {-1, 2}, {3, 0.5}};
  const double h1 = herglotz_violation([](cplx z) { return -1.0 / z; }, zs);
  const double h2 = herglotz_violation([](cplx z) { return std::conj(z); }, zs);
  r.add(0.0, "herglotz_minus_inverse", "value", h1, h1 == 0.0);
  r.add(0.0, "herglotz_conjugate_negative_control", "value", h2, h2 > 0.0);
  return r;
}

}  // namespace eb
