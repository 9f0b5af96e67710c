#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edgebulk/bessel_system.hpp"
#include "edgebulk/coupling.hpp"
#include "edgebulk/linalg2.hpp"

namespace eb {

// Flat key=value configuration shared by all subcommands. Lines starting with
// '#' are comments; unknown keys are rejected.
struct ExperimentConfig {
  BesselParams params{2.0, 0.0};
  std::vector<double> E_list{1e2, 1e3, 1e4};
  std::uint64_t seed = 20240101;
  std::size_t paths = 200;
  CouplingConfig coupling{};

  // Integration grid on the clock.
  double phase_cap = 0.05;
  double max_step = 0.0;  // 0 selects phase_cap / 50

  // Vague-convergence test function: bump on [bump_lo, bump_hi] in one coordinate.
  double bump_lo = 0.1;
  double bump_hi = 0.6;
  int bump_component = 0;

  // Spectral window and eigenvalue search.
  double window_lo = -8.0;
  double window_hi = 8.0;
  double core_fraction = 0.6;
  double resolution = 0.25;  // scan step; roots are counted on the continuous Pruefer angle
  std::vector<double> eps_schedule{1e-3, 1e-4};
  std::vector<cplx> z_grid{{0.0, 1.0}, {1.0, 1.0}, {-1.0, 2.0}};
  double lp_tol = 1e-6;
  double sine_horizon = 12.0;     // clock horizon of the sine system
  double w_threshold = 1e-8;      // Bessel limit-circle horizon
  double phi_horizon = 20.0;      // backward integration horizon (unshifted time)

  // Asymptotics.
  double lambda = 1.0;
  double T = 50.0;
  std::size_t phase_paths = 2000;
  double envelope_exponent = 0.6;
  double envelope_quantile = 0.975;

  // Thresholds for pass flags.
  double slope_max = -0.05;
  double ratio_max = 1.0 / 3.0;
  double ks_max = 0.08;
  std::size_t mass_count = 300;
  double phase_ks_max = 0.05;
  double slope_tol = 0.05;
  double envelope_fraction = 0.95;
  double herglotz_tol = 1e-8;

  bool exploratory_bessel = false;
  std::string output_dir = "out";

  void set(const std::string& key, const std::string& value);
  void validate() const;
  // One key=value line per key in a fixed order with 17 significant digits.
  std::string canonical() const;
  std::string hash() const;
  double effective_max_step() const { return max_step > 0 ? max_step : phase_cap / 50.0; }
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace eb
