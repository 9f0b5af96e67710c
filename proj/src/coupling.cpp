#include "edgebulk/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "edgebulk/errors.hpp"

namespace eb {

void CouplingConfig::validate() const {
  if (!(alpha > 0 && alpha < 0.5)) throw ConfigError("coupling alpha must lie in (0, 1/2)");
  if (!(delta > 0 && delta < alpha / 3.0)) throw ConfigError("coupling delta must lie in (0, alpha/3)");
}

double CouplingPartition::theta_clock(double s_value) const {
  return 0.5 * std::numbers::pi - 2.0 * std::sqrt(E) * (-std::expm1(-s_value));
}

CouplingPartition coupling_partition(const ShiftParams& shift, const CouplingConfig& config) {
  config.validate();
  CouplingPartition part;
  part.E = shift.E;
  part.c = shift.c;
  part.sigma2 = std::log1p(std::pow(shift.E, -config.p()));
  const double end = shift.clock_tau();
  const double n_real = std::ceil(std::log(shift.E) / (2.0 * part.sigma2));
  if (!(n_real >= 1) || n_real > 1e7) throw ConfigError("coupling partition size out of range");
  part.N = static_cast<std::size_t>(n_real);
  part.s.resize(part.N + 1);
  for (std::size_t j = 0; j < part.N; ++j) part.s[j] = static_cast<double>(j) * part.sigma2;
  part.s[part.N] = end;
  part.t.resize(part.N + 1);
  for (std::size_t j = 0; j < part.N; ++j) part.t[j] = log_time_inverse(part.s[j], shift.c);
  part.t[part.N] = shift.tau;
  return part;
}

std::vector<double> coupling_breaks(const CouplingPartition& partition, double clock_end) {
  std::vector<double> b = partition.s;
  if (clock_end > b.back() * (1 + 1e-12)) b.push_back(clock_end);
  return b;
}

ComplexPath oscillatory_integral_path(const PolarPair& pair, const RealPath& clock_noise) {
  const std::size_t n = pair.grid.size();
  std::vector<cplx> v(n, 0.0);
  const cplx i_sqrt2(0.0, std::numbers::sqrt2);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double db = clock_noise.values[k + 1] - clock_noise.values[k];
    v[k + 1] = v[k] + i_sqrt2 * std::polar(1.0, -2.0 * pair.xi[k]) * db;
  }
  return ComplexPath{pair.grid, std::move(v)};
}

cplx oscillatory_integral(const PolarPair& pair, const RealPath& clock_noise, double s) {
  return oscillatory_integral_path(pair, clock_noise).at(s);
}

CoupledNoise build_coupled_w(const RealPath& clock_noise, const PolarPair& g, const CouplingPartition& partition,
                             const ShiftParams& shift, const RngSeed& fill_seed) {
  (void)shift;
  const TimeGrid& grid = clock_noise.grid;
  if (!(g.grid == grid)) throw ConfigError("build_coupled_w: phase and noise grids differ");
  CoupledNoise out;
  out.clock_noise = clock_noise;
  out.sigma2 = partition.sigma2;
  out.pin_nodes.resize(partition.N + 1);
  for (std::size_t j = 0; j <= partition.N; ++j) {
    const std::size_t k = grid.find_node(partition.s[j]);
    if (k == TimeGrid::npos) throw ConfigError("build_coupled_w: grid does not refine the coupling partition");
    out.pin_nodes[j] = k;
  }
  std::vector<cplx> W(grid.size(), 0.0);
  CounterRng fill(fill_seed);
  const double sqrt2 = std::numbers::sqrt2;
  cplx pin_value = 0.0;
  for (std::size_t j = 1; j <= partition.N; ++j) {
    const std::size_t k0 = out.pin_nodes[j - 1], k1 = out.pin_nodes[j];
    CouplingInterval iv;
    iv.length = grid[k1] - grid[k0];
    double s11 = 0, s12 = 0, s22 = 0;
    cplx bt = 0.0;
    for (std::size_t k = k0; k < k1; ++k) {
      const double phi = 2.0 * partition.theta_clock(grid[k]);
      const double sn = std::sin(phi), cs = std::cos(phi);
      const double h = grid.gap(k);
      const double db = clock_noise.values[k + 1] - clock_noise.values[k];
      // i e^{-i phi} = sin(phi) + i cos(phi).
      bt += cplx(sn, cs) * (sqrt2 * db);
      s11 += 2.0 * h * sn * sn;
      s12 += 2.0 * h * sn * cs;
      s22 += 2.0 * h * cs * cs;
    }
    iv.B_theta = bt;
    iv.Sigma = {s11, s12, s12, s22};
    const auto ev = sym_eigenvalues(iv.Sigma);
    if (!(ev[0] > 1e-12 * (s11 + s22))) throw CouplingError("coupling covariance is numerically singular", j);
    const Mat2 M = sym_function(iv.Sigma, [](double x) { return 1.0 / std::sqrt(x); }) * std::sqrt(iv.length);
    const Vec2 white = M * Vec2{bt.real(), bt.imag()};
    const double lag = g.xi[k0] - partition.theta_clock(grid[k0]);
    iv.W_j = std::polar(1.0, -2.0 * lag) * cplx(white[0], white[1]);
    out.intervals.push_back(iv);

    // Independent complex Brownian bridge between the pins.
    std::vector<cplx> free(k1 - k0 + 1, 0.0);
    for (std::size_t k = k0; k < k1; ++k) {
      const double sh = std::sqrt(grid.gap(k));
      const double re = fill.normal(), im = fill.normal();
      free[k - k0 + 1] = free[k - k0] + cplx(re, im) * sh;
    }
    for (std::size_t k = k0 + 1; k < k1; ++k) {
      const double frac = (grid[k] - grid[k0]) / iv.length;
      W[k] = pin_value + frac * iv.W_j + (free[k - k0] - frac * free.back());
    }
    pin_value += iv.W_j;
    W[k1] = pin_value;
  }
  for (std::size_t k = out.pin_nodes.back(); k + 1 < grid.size(); ++k) {
    const double sh = std::sqrt(grid.gap(k));
    const double re = fill.normal(), im = fill.normal();
    W[k + 1] = W[k] + cplx(re, im) * sh;
  }
  out.W = ComplexPath{grid, std::move(W)};
  return out;
}

double coupling_window_clock(const ShiftParams& shift, const CouplingConfig& config) {
  return (0.5 - config.alpha) * std::log(shift.E);
}

double deviation_sup(const CoupledNoise& coupled, const PolarPair& g, const ShiftParams& shift,
                     const CouplingConfig& config) {
  const ComplexPath I = oscillatory_integral_path(g, coupled.clock_noise);
  const double end = coupling_window_clock(shift, config);
  double sup = 0.0;
  for (std::size_t k = 0; k < I.grid.size() && I.grid[k] <= end * (1 + 1e-12); ++k) {
    sup = std::max(sup, std::abs(I.values[k] - coupled.W.values[k]));
  }
  return sup;
}

double averaging_sup(const PolarPair& pair, int k, const ShiftParams& shift, double window_end) {
  if (k == 0) throw DomainError("averaging_sup: k must be nonzero");
  const double end = log_time(window_end, shift.c);
  const TimeGrid& grid = pair.grid;
  cplx acc = 0.0;
  double sup = 0.0;
  for (std::size_t j = 0; j + 1 < grid.size() && grid[j] < end; ++j) {
    const double s1 = std::min(grid[j + 1], end);
    const double h = s1 - grid[j];
    // xi linear on the step (restricted to [s_j, s1]).
    const double dphase = k * (pair.xi[j + 1] - pair.xi[j]) * (h / grid.gap(j));
    const cplx e0 = std::polar(1.0, k * pair.xi[j]);
    cplx factor;
    if (std::abs(dphase) < 1e-8) {
      factor = cplx(1.0, 0.5 * dphase);
    } else {
      factor = (std::polar(1.0, dphase) - 1.0) / cplx(0.0, dphase);
    }
    acc += h * e0 * factor;
    sup = std::max(sup, std::abs(acc));
  }
  return sup;
}

RealPath gbm_reference(const CoupledNoise& coupled, const BesselParams& params) {
  const TimeGrid& grid = coupled.W.grid;
  std::vector<double> z(grid.size(), 1.0);
  if (!std::isinf(params.beta)) {
    const double amp = params.noise_amp(), drift = 2.0 / params.beta;
    for (std::size_t k = 0; k < grid.size(); ++k) z[k] = std::exp(amp * coupled.W.values[k].imag() - drift * grid[k]);
  }
  return RealPath{grid, std::move(z)};
}

GbmComparison gbm_compare(const PolarPair& g, const CoupledNoise& coupled, const BesselParams& params,
                          const ShiftParams& shift, const CouplingConfig& config) {
  const RealPath Z = gbm_reference(coupled, params);
  const double end = coupling_window_clock(shift, config);
  GbmComparison out{0.0, 0.0};
  for (std::size_t k = 0; k < Z.grid.size() && Z.grid[k] <= end * (1 + 1e-12); ++k) {
    out.sup_log = std::max(out.sup_log, std::abs(2.0 * g.rho[k] + std::log(Z.values[k])));
    out.sup_lin = std::max(out.sup_lin, std::abs(std::exp(-2.0 * g.rho[k]) - Z.values[k]));
  }
  return out;
}

double rehbm_compare(const FundamentalPair& pair, const CoupledNoise& coupled, const BesselParams& params,
                     const ShiftParams& shift, const CouplingConfig& config) {
  const RealPath Z = gbm_reference(coupled, params);
  const double amp = params.noise_amp();
  const double end = coupling_window_clock(shift, config);
  double x = 0.0, sup = 0.0;
  for (std::size_t k = 0; k < Z.grid.size() && Z.grid[k] <= end * (1 + 1e-12); ++k) {
    const double lhs = -std::exp(-pair.delta_rho(k)) * std::cos(pair.delta_xi(k));
    sup = std::max(sup, std::abs(lhs - x));
    if (k + 1 < Z.grid.size()) x += amp * Z.values[k] * (coupled.W.values[k + 1] - coupled.W.values[k]).real();
  }
  return sup;
}

}  // namespace eb
