#include "edgebulk/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edgebulk/errors.hpp"
#include "edgebulk/sturm_liouville.hpp"

namespace eb {

std::size_t bessel_horizon_node(const FundamentalPair& pair, const BesselParams& params, double w_threshold,
                                double min_clock) {
  const double log_thr = std::log(w_threshold);
  const TimeGrid& grid = pair.f.grid;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double s = grid[k];
    if (s < min_clock) continue;
    if (log_p_clock(params, s, pair.noise.values[k]) - 2.0 * s < log_thr) return k;
  }
  throw HorizonError("bessel_horizon_node: w stays above " + std::to_string(w_threshold) + " up to clock " +
                     std::to_string(grid.back()));
}

LcBoundary bessel_right_boundary_lc(const FundamentalPair& pair, const BesselParams& params, std::size_t node) {
  params.validate();
  if (!(std::abs(params.a) < 1)) throw DomainError("bessel_right_boundary_lc: requires |a| < 1");
  return bessel_truncation_boundary(pair, node);
}

LcBoundary bessel_truncation_boundary(const FundamentalPair& pair, std::size_t node) {
  if (node >= pair.size()) throw RangeError("bessel boundary: node beyond the pair");
  const double rf = pair.f.rho[node], rg = pair.g.rho[node];
  const double m = std::max(rf, rg);
  const double v1 = -std::exp(rf - m) * std::sin(pair.f.xi[node]);
  const double v2 = std::exp(rg - m) * std::sin(pair.g.xi[node]);
  const double n = std::hypot(v1, v2);
  if (!(n > 1e-12) || !std::isfinite(n)) {
    throw HorizonError("bessel_right_boundary_lc: degenerate Wronskian vector at clock " +
                       std::to_string(pair.f.grid[node]));
  }
  return {BoundaryData::from_vector({v1 / n, v2 / n}), node, pair.f.grid[node]};
}

RealPath unshifted_noise(const RngSeed& seed, double horizon, double step) {
  if (!(horizon > 0) || !(step > 0)) throw DomainError("unshifted_noise: horizon and step must be positive");
  const std::size_t n = static_cast<std::size_t>(std::ceil(horizon / step));
  std::vector<double> t(n + 1);
  for (std::size_t k = 0; k <= n; ++k) t[k] = k == n ? horizon : step * static_cast<double>(k);
  return sample_brownian(seed, TimeGrid(std::move(t)));
}

CVec2 beta_gt2_vector(const BesselParams& params, const ShiftParams& shift, const FundamentalPair& pair,
                      const RealPath& unshifted, cplx z, const BetaGt2Options& options) {
  if (!(params.beta > 2) || !(params.a >= 1)) throw DomainError("beta_gt2_vector: requires beta > 2 and a >= 1");
  if (unshifted.grid.front() != 0.0 || unshifted.grid.back() < options.horizon * (1 - 1e-12)) {
    throw DomainError("beta_gt2_vector: unshifted noise must cover [0, horizon]");
  }
  const std::size_t last = pair.size() - 1;
  if (std::abs(pair.f.grid[last] - shift.clock_tau()) > 1e-9 * shift.clock_tau()) {
    throw DomainError("beta_gt2_vector: the pair must end at the clock of log E");
  }
  RealPath B = unshifted;
  if (B.grid.back() > options.horizon) {
    const std::size_t k = B.grid.interval_of(options.horizon);
    std::vector<double> t(B.grid.nodes().begin(), B.grid.nodes().begin() + static_cast<std::ptrdiff_t>(k) + 1);
    std::vector<double> v(B.values.begin(), B.values.begin() + static_cast<std::ptrdiff_t>(k) + 1);
    if (options.horizon > t.back()) {
      v.push_back(unshifted.at(options.horizon));
      t.push_back(options.horizon);
    }
    B = RealPath{TimeGrid(std::move(t)), std::move(v)};
  }
  const cplx zeta = unshift_solution(shift).eigenparameter(z);
  const auto states = integrate_sl(params, zeta, B, SlState{1.0, 0.0}, true);
  // p~(0) = 1, so q(0) is the derivative at log E.
  const cplx phi = states.front().f, dphi = states.front().q;
  const double xf = pair.f.xi[last], xg = pair.g.xi[last];
  const cplx den = phi * std::sin(xg) - dphi * std::cos(xg);
  if (std::abs(den) < options.degenerate_tol * (std::abs(phi) + std::abs(dphi))) {
    throw DegenerateBoundaryError("beta_gt2_vector: normalizing Wronskian vanishes");
  }
  const cplx num = dphi * std::cos(xf) - phi * std::sin(xf);
  const cplx u1 = std::exp(pair.f.rho[last] - pair.g.rho[last]) * num / den;
  if (!std::isfinite(u1.real()) || !std::isfinite(u1.imag())) {
    throw DegenerateBoundaryError("beta_gt2_vector: non-finite boundary vector");
  }
  return {u1, cplx(1.0)};
}

BoundaryData bessel_right_boundary_beta_gt2(const BesselParams& params, const ShiftParams& shift,
                                            const FundamentalPair& pair, const RealPath& unshifted,
                                            const BetaGt2Options& options) {
  // Fail early on the construction itself rather than at the first evaluation.
  (void)beta_gt2_vector(params, shift, pair, unshifted, cplx(0.0, 1.0), options);
  return BoundaryData::from_evaluator(
      [=](cplx z) { return beta_gt2_vector(params, shift, pair, unshifted, z, options); });
}

}  // namespace eb
