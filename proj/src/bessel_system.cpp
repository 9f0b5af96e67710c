#include "edgebulk/bessel_system.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "edgebulk/errors.hpp"

namespace eb {

void BesselParams::validate() const {
  if (!(beta > 0)) throw DomainError("beta must be positive");
  if (!(a > -1) || !std::isfinite(a)) throw DomainError("a must be a finite real > -1");
}

double BesselParams::noise_amp() const { return std::isinf(beta) ? 0.0 : 2.0 / std::sqrt(beta); }

double ShiftParams::clock_tau() const { return 0.5 * std::log(E); }

ShiftParams shift_params(const BesselParams& params, double E) {
  params.validate();
  if (!(E > 1) || !std::isfinite(E)) throw DomainError("shift_params: E must exceed 1");
  ShiftParams s;
  s.E = E;
  s.c = (params.beta > 2 && params.a >= 1) ? 1.0 - 1.0 / std::sqrt(E) : 1.0;
  s.tau = (1.0 - 1.0 / std::sqrt(E)) / s.c;
  s.eps = 1.0 / s.c - 1.0;
  return s;
}

double eta(double t, const ShiftParams& shift) { return 2.0 * log_time(t, shift.c); }

double eta_prime(double t, const ShiftParams& shift) {
  return 2.0 * shift.c * std::exp(0.5 * eta(t, shift));
}

double eta_inverse(double eta_value, const ShiftParams& shift) {
  return log_time_inverse(0.5 * eta_value, shift.c);
}

Weights pw_weights(double t, const RealPath& B, const BesselParams& params) {
  const double b = B.at(t);
  const double lp = -params.a * t - params.noise_amp() * b;
  return {std::exp(lp), std::exp(lp - t)};
}

RealPath original_time_brownian(const RealPath& clock_noise) {
  std::vector<double> t(clock_noise.grid.nodes());
  std::vector<double> v(clock_noise.values);
  for (auto& x : t) x *= 2.0;
  for (auto& x : v) x *= std::numbers::sqrt2;
  return RealPath{TimeGrid(std::move(t), TimeScale::native), std::move(v)};
}

double log_p_clock(const BesselParams& params, double s, double bhat) {
  return -2.0 * params.a * s - params.noise_amp() * std::numbers::sqrt2 * bhat;
}

GridPolicy bessel_grid_policy(const ShiftParams& shift, double phase_cap, double max_step) {
  GridPolicy policy;
  policy.max_step = max_step;
  policy.phase_cap = phase_cap;
  const double omega = 2.0 * std::sqrt(shift.E);
  policy.fast_rate = [omega](double s) { return omega * std::exp(-s); };
  return policy;
}

PolarPair integrate_polar(const BesselParams& params, const ShiftParams& shift, double xi0, const RealPath& noise,
                          const PolarOptions& options) {
  params.validate();
  const TimeGrid& grid = noise.grid;
  if (grid.front() != 0.0) throw DomainError("integrate_polar: clock grid must start at 0");
  if (grid.back() > kMaxClock * (1 + 1e-12)) throw DomainError("integrate_polar: grid extends past c t = 1 - 1e-8");
  const double omega = 2.0 * std::sqrt(shift.E);
  if (std::isfinite(options.phase_cap)) {
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      if (omega * std::exp(-grid[k]) * grid.gap(k) > options.phase_cap * (1 + 1e-9)) {
        throw ConfigError("integrate_polar: grid violates the phase cap at s=" + std::to_string(grid[k]));
      }
    }
  }
  const double k1 = params.a + 0.5;
  const double ib = params.inv_beta();
  const double sb = std::isinf(params.beta) ? 0.0 : std::sqrt(2.0 / params.beta);
  auto drift = [=](const SdeState<2>& x, double) -> SdeState<2> {
    const double c2 = std::cos(2 * x[1]), s2 = std::sin(2 * x[1]);
    const double c4 = c2 * c2 - s2 * s2, s4 = 2 * s2 * c2;
    return {ib - k1 * c2 - ib * c4, k1 * s2 + ib * s4};
  };
  auto diffusion = [=](const SdeState<2>& x, double) -> SdeState<2> {
    return {-sb * std::cos(2 * x[1]), sb * std::sin(2 * x[1])};
  };
  auto rotation = [=](const SdeState<2>& x, double s0, double s1) -> SdeState<2> {
    // Exact integral of -2 sqrt(E) exp(-s) ds.
    return {x[0], x[1] - omega * (std::exp(-s0) - std::exp(-s1))};
  };
  const auto states = integrate_sde<2>(drift, diffusion, rotation, SdeState<2>{0.0, xi0}, grid, noise, options.scheme);
  PolarPair out;
  out.grid = grid;
  out.rho.resize(states.size());
  out.xi.resize(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    out.rho[k] = states[k][0];
    out.xi[k] = states[k][1];
  }
  return out;
}

double FundamentalPair::wronskian_defect(std::size_t k) const {
  return std::abs(std::exp(f.rho[k] + g.rho[k]) * std::sin(g.xi[k] - f.xi[k]) - 1.0);
}

FundamentalPair fundamental_pair(const BesselParams& params, const ShiftParams& shift, const RealPath& noise,
                                 const PolarOptions& options) {
  FundamentalPair fp;
  fp.noise = noise;
  fp.f = integrate_polar(params, shift, 0.0, noise, options);
  fp.f.C = std::pow(shift.E, 0.25);
  fp.g = integrate_polar(params, shift, 0.5 * std::numbers::pi, noise, options);
  fp.g.C = std::pow(shift.E, -0.25);
  return fp;
}

FundamentalPair fundamental_pair(const BesselParams& params, const ShiftParams& shift, const RngSeed& seed,
                                 const TimeGrid& grid, const PolarOptions& options) {
  FundamentalPair fp = fundamental_pair(params, shift, sample_brownian(seed, grid), options);
  fp.seed = seed;
  return fp;
}

SolutionValue solutions_from_polar(const PolarPair& pair, const ShiftParams& shift, const RealPath& noise,
                                   const BesselParams& params, std::size_t k) {
  const double s = pair.grid[k];
  const double half_logp = 0.5 * log_p_clock(params, s, noise.values[k]);
  const double e4 = std::pow(shift.E, 0.25);
  const double amp = std::exp(pair.rho[k] - half_logp);
  return {pair.C / e4 * std::exp(0.5 * s) * amp * std::cos(pair.xi[k]),
          pair.C * e4 * std::exp(-0.5 * s) * amp * std::sin(pair.xi[k])};
}

BesselMatrix bessel_matrix(const FundamentalPair& pair, std::size_t k, const ShiftParams& shift) {
  const double c = shift.c;
  const double rf = pair.f.rho[k], rg = pair.g.rho[k];
  const double xf = pair.f.xi[k], xg = pair.g.xi[k];
  const double sd = std::sin(xg - xf);
  if (!(sd > 0)) {
    throw IntegrityError("bessel_matrix: sin of the phase gap is not positive at s=" + std::to_string(pair.f.grid[k]));
  }
  BesselMatrix m;
  const double vg = std::exp(rg) * std::cos(xg);
  const double vf = std::exp(rf) * std::cos(xf);
  m.full = {c * vg * vg, c * vg * vf, c * vg * vf, c * vf * vf};
  const long double ql = std::exp(-static_cast<long double>(rg - rf));
  const long double sdl = std::sin(static_cast<long double>(xg) - static_cast<long double>(xf));
  const long double pre = static_cast<long double>(c) / (2.0L * ql * sdl);
  const long double off = pre * ql * std::cos(static_cast<long double>(xg) - static_cast<long double>(xf));
  m.hyperbolic = {pre, off, off, pre * ql * ql};
  const double half = 0.5 * c;
  const double osc_off = half * std::exp(rf + rg) * std::cos(xf + xg);
  m.oscillatory = {half * std::exp(2 * rg) * std::cos(2 * xg), osc_off, osc_off,
                   half * std::exp(2 * rf) * std::cos(2 * xf)};
  return m;
}

CoefficientMatrixField bessel_field(const FundamentalPair& pair, const ShiftParams& shift, std::size_t last) {
  if (last >= pair.size()) throw RangeError("bessel_field: node beyond the polar pair");
  const auto& nodes = pair.f.grid.nodes();
  std::vector<double> s(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  std::vector<Mat2> H(last + 1);
  for (std::size_t k = 0; k <= last; ++k) H[k] = bessel_matrix(pair, k, shift).full;
  return field_from_log_clock(s, shift.c, std::move(H));
}

std::vector<double> varpi_path(const RealPath& B, const BesselParams& params) {
  const double amp = params.noise_amp();
  std::vector<double> out(B.grid.size(), 0.0);
  auto integrand = [&](std::size_t k) { return std::exp(params.a * B.grid[k] + amp * B.values[k]); };
  double prev = integrand(0);
  for (std::size_t k = 0; k + 1 < B.grid.size(); ++k) {
    const double next = integrand(k + 1);
    out[k + 1] = out[k] + 0.5 * (prev + next) * B.grid.gap(k);
    prev = next;
  }
  return out;
}

double varpi(double t, const RealPath& B, const BesselParams& params) {
  return RealPath{B.grid, varpi_path(B, params)}.at(t);
}

WeylType weyl_classification(const BesselParams& params) {
  params.validate();
  return params.a < 1 ? WeylType::limit_circle_infinity : WeylType::limit_point_infinity;
}

WeylBound weyl_bound_check(const RealPath& B, const BesselParams& params, double delta, double T) {
  params.validate();
  if (!(std::abs(params.a) < 1)) throw DomainError("weyl_bound_check: requires |a| < 1");
  if (!(delta > 0) || !(delta < std::min((1 - params.a) / 3.0, 0.5))) {
    throw DomainError("weyl_bound_check: delta outside (0, (1-a)/3 and 1/2)");
  }
  const auto vp = varpi_path(B, params);
  const double amp = params.noise_amp();
  WeylBound out{0.0, 0.0};
  for (std::size_t k = 0; k < B.grid.size() && B.grid[k] <= T; ++k) {
    const double t = B.grid[k];
    const double logw = -(params.a + 1) * t - amp * B.values[k];
    out.C_w = std::max(out.C_w, std::exp(logw + (1 + params.a - delta) * t));
    out.C_varpi_w = std::max(out.C_varpi_w, vp[k] * vp[k] * std::exp(logw + (1 - params.a - 3 * delta) * t));
  }
  return out;
}

UnshiftMap unshift_solution(const ShiftParams& shift) { return UnshiftMap{shift.E, std::log(shift.E)}; }

RealPath UnshiftMap::translated(const RealPath& B_original) const {
  const double b0 = B_original.at(time_shift);
  std::vector<double> t{0.0}, v{0.0};
  for (std::size_t k = 0; k < B_original.grid.size(); ++k) {
    const double tk = B_original.grid[k] - time_shift;
    if (tk > 1e-12 * std::max(1.0, time_shift)) {
      t.push_back(tk);
      v.push_back(B_original.values[k] - b0);
    }
  }
  return RealPath{TimeGrid(std::move(t), TimeScale::native), std::move(v)};
}

ReversedInit reversed_initial(double lambda, double f_m1, double fp_m1) {
  if (!(lambda > 0)) throw DomainError("reversed_initial: lambda must be positive");
  const double S = std::pow(lambda, 0.25) * std::exp(0.25);
  const double u = S * f_m1, v = -fp_m1 / S;
  const double norm = std::hypot(u, v);
  if (!(norm > 0)) throw DomainError("reversed_initial: zero initial data");
  return {std::log(norm), std::atan2(v, u)};
}

GridPolicy reversed_grid_policy(double lambda, double phase_cap, double max_step, double min_step) {
  GridPolicy policy;
  policy.max_step = max_step;
  policy.phase_cap = phase_cap;
  policy.min_step = min_step;
  const double sl = std::sqrt(lambda);
  policy.fast_rate = [sl](double t) { return sl * std::exp(0.5 * t); };
  return policy;
}

ReversedPolar integrate_reversed_polar(const BesselParams& params, double lambda, const ReversedInit& init,
                                       const RealPath& noise, SdeScheme scheme) {
  params.validate();
  if (!(lambda > 0)) throw DomainError("integrate_reversed_polar: lambda must be positive");
  if (noise.grid.front() != 1.0) throw DomainError("integrate_reversed_polar: grid must start at t = 1");
  const double lin = 0.5 * params.inv_beta() - 0.5 * params.a;
  const double k1 = 0.25 + 0.5 * params.a;
  const double hb = 0.5 * params.inv_beta();
  const double amp_r = params.noise_amp();
  const double amp_x = 0.5 * params.noise_amp();
  const double sl2 = 2.0 * std::sqrt(lambda);
  auto drift = [=](const SdeState<2>& x, double) -> SdeState<2> {
    const double c2 = std::cos(2 * x[1]), s2 = std::sin(2 * x[1]);
    const double c4 = c2 * c2 - s2 * s2, s4 = 2 * s2 * c2;
    return {lin + k1 * c2 - hb * c4, -(k1 * s2 - hb * s4)};
  };
  auto diffusion = [=](const SdeState<2>& x, double) -> SdeState<2> {
    const double s = std::sin(x[1]);
    return {amp_r * s * s, amp_x * std::sin(2 * x[1])};
  };
  auto rotation = [=](const SdeState<2>& x, double t0, double t1) -> SdeState<2> {
    return {x[0], x[1] - sl2 * (std::exp(0.5 * t1) - std::exp(0.5 * t0))};
  };
  const auto states = integrate_sde<2>(drift, diffusion, rotation, SdeState<2>{init.r1, init.xi1}, noise.grid, noise,
                                       scheme);
  ReversedPolar rp;
  rp.grid = noise.grid;
  rp.lambda = lambda;
  rp.r.resize(states.size());
  rp.xi.resize(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    rp.r[k] = states[k][0];
    rp.xi[k] = states[k][1];
  }
  return rp;
}

SolutionValue reversed_solution(const ReversedPolar& rp, std::size_t k) {
  const double t = rp.grid[k];
  const double S = std::pow(rp.lambda, 0.25) * std::exp(0.25 * t);
  const double e = std::exp(rp.r[k]);
  return {e * std::cos(rp.xi[k]) / S, -S * e * std::sin(rp.xi[k])};
}

}  // namespace eb
