#pragma once

// Monte Carlo sweeps over (E, path) cells. Every cell is a pure function of the
// configuration and its indices; cells run on a fixed-size worker pool and are
// reduced in (E, path) order, so the thread count never changes a result.

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <memory>
#include <thread>
#include <vector>

#include "edgebulk/boundary.hpp"
#include "edgebulk/config.hpp"
#include "edgebulk/coupling.hpp"
#include "edgebulk/report.hpp"
#include "edgebulk/sine_system.hpp"
#include "edgebulk/spectral.hpp"

namespace eb {

// Runs fn(0..n-1) on `threads` workers; results keep index order. The first
// exception by index is rethrown after all workers finish.
template <class T>
std::vector<T> parallel_map(std::size_t n, unsigned threads, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned k = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (k == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < k; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

// Stream ids below the experiment seed.
namespace streams {
inline constexpr std::uint64_t clock_noise = 1;
inline constexpr std::uint64_t fill = 2;
inline constexpr std::uint64_t unshifted = 3;
inline constexpr std::uint64_t reversed = 4;
inline constexpr std::uint64_t sine_only = 5;
}  // namespace streams

// Everything one coupled path produces: the clock grid, the Bessel pair and the
// complex noise with the hyperbolic path it drives.
struct CoupledPath {
  ShiftParams shift;
  CouplingPartition partition;
  FundamentalPair pair;
  CoupledNoise coupled;
  HyperbolicPath hbm;
};

// clock_end extends the grid past the partition (0 keeps it at 0.5 log E).
CoupledPath simulate_coupled_path(const ExperimentConfig& cfg, double E, std::size_t path, double clock_end = 0.0);

// phi(t) = bump(t) e_component with bump(t) = exp(1 - 1/(1 - x^2)), x the
// position in the support rescaled to (-1, 1).
struct TestFunction {
  double lo;
  double hi;
  int component;
  double bump(double t) const;
};

// int phi^T (H_Bessel - H_sine) phi dt by the trapezoid rule on the shared native grid.
double vague_statistic(const CoupledPath& cp, const TestFunction& phi);

// Canonical-system data of one system realization: field truncated where the
// right boundary is read, plus that boundary.
struct SpectralSystem {
  std::shared_ptr<const CoefficientMatrixField> field;
  BoundaryData boundary;
  double clock_end;
};

SpectralSystem bessel_spectral_system(const ExperimentConfig& cfg, const CoupledPath& cp, std::size_t path);
// beta > 2: boundary (x(horizon), 1) of the limit-circle end. beta <= 2: the
// same vector is used as a truncation boundary of the limit-point end.
SpectralSystem sine_spectral_system(const HyperbolicPath& hbm, double beta, double horizon);

// Eigenvalues with local bisection wherever the Pruefer angle jumps by more than pi.
std::vector<double> certified_eigenvalues(const SpectralSystem& sys, double lo, double hi, double resolution);

// Worst-case node diagnostics of one fundamental pair.
struct PairDiagnostics {
  double wronskian_sup;      // max |e^{rho_f + rho_g} sin(xi_g - xi_f) - 1|
  double rank1_ratio;        // max smallest eigenvalue / trace of the full matrix
  double hyperbolic_det_err; // max |det(hyperbolic part) - c^2/4|
};
PairDiagnostics pair_diagnostics(const FundamentalPair& pair, const ShiftParams& shift);

// Max over clock nodes with eta = 2 s <= eta_max of the energy-norm relative error
// hypot(E^{1/4} df, E^{-1/4} df') / hypot(E^{1/4} f, E^{-1/4} f') of the zero-noise
// beta = infinity polar reconstruction against the Bessel-function closed form,
// taken over both f and g.
double bessel_oracle_error(double a, double E, double eta_max, double phase_cap, double max_step);

StatsReport run_vague_convergence(const ExperimentConfig& cfg, const TestFunction& phi, unsigned threads = 1);
StatsReport run_vague_convergence(const ExperimentConfig& cfg, unsigned threads = 1);
StatsReport run_spectral_convergence(const ExperimentConfig& cfg, unsigned threads = 1);
StatsReport run_wt_convergence(const ExperimentConfig& cfg, unsigned threads = 1);
StatsReport run_asymptotics(const ExperimentConfig& cfg, unsigned threads = 1);
StatsReport run_coupling_decay(const ExperimentConfig& cfg, unsigned threads = 1);
StatsReport run_gamma_masses(const ExperimentConfig& cfg, unsigned threads = 1);
StatsReport run_selftest(const ExperimentConfig& cfg);

}  // namespace eb
