#pragma once

// Stochastic Bessel operator G = -(1/w) d/dt p d/dt with
//   p(t) = exp(-a t - (2/sqrt(beta)) B(t)),  w(t) = exp(-(a+1) t - (2/sqrt(beta)) B(t)),
// its shifted/time-changed canonical system and the polar coordinates of its
// fundamental solutions.
//
// Noise convention. Every routine here is driven by the clock noise Bhat(s), a
// standard Brownian motion in the logarithmic time s = -log(1 - c t). In native
// time this is Bhat(s) = int sqrt(c / (1 - c t)) dB_E(t), and the original
// operator noise is recovered as B(eta) = sqrt(2) Bhat(eta / 2) since eta = 2 s.

#include <limits>
#include <vector>

#include "edgebulk/field.hpp"
#include "edgebulk/paths.hpp"
#include "edgebulk/rng.hpp"
#include "edgebulk/sde.hpp"

namespace eb {

struct BesselParams {
  double beta = 2.0;  // may be +infinity (deterministic operator)
  double a = 0.0;

  void validate() const;
  double inv_beta() const { return 1.0 / beta; }
  // 2 / sqrt(beta), the noise amplitude in p and w.
  double noise_amp() const;
};

struct ShiftParams {
  double E = 0.0;
  double c = 1.0;
  double tau = 0.0;
  double eps = 0.0;
  // Logarithmic time of tau: 0.5 log E.
  double clock_tau() const;
};

ShiftParams shift_params(const BesselParams& params, double E);

double eta(double t, const ShiftParams& shift);
double eta_prime(double t, const ShiftParams& shift);
double eta_inverse(double eta_value, const ShiftParams& shift);

// Largest logarithmic time accepted for extended integrations (c t <= 1 - 1e-8).
inline constexpr double kMaxClock = 18.420680743952367;

struct Weights {
  double p;
  double w;
};

// p and w at original time t for a Brownian path B on original time.
Weights pw_weights(double t, const RealPath& B, const BesselParams& params);

// B(eta) = sqrt(2) Bhat(eta / 2) on the grid eta = 2 s.
RealPath original_time_brownian(const RealPath& clock_noise);

// log p(eta) at eta = 2 s given Bhat(s).
double log_p_clock(const BesselParams& params, double s, double bhat);

struct PolarPair {
  TimeGrid grid;  // logarithmic clock
  std::vector<double> rho;
  std::vector<double> xi;  // unwrapped
  double C = 1.0;
};

struct PolarOptions {
  SdeScheme scheme = SdeScheme::milstein_heun;
  // When finite, every step must satisfy 2 sqrt(E) exp(-s) ds <= phase_cap.
  double phase_cap = std::numeric_limits<double>::infinity();
};

// Grid policy on the logarithmic clock resolving the rotation rate 2 sqrt(E) exp(-s).
GridPolicy bessel_grid_policy(const ShiftParams& shift, double phase_cap, double max_step);

PolarPair integrate_polar(const BesselParams& params, const ShiftParams& shift, double xi0, const RealPath& noise,
                          const PolarOptions& options = {});

struct FundamentalPair {
  PolarPair f;  // xi(0) = 0, C = E^{1/4}
  PolarPair g;  // xi(0) = pi/2, C = E^{-1/4}
  RngSeed seed;
  RealPath noise;

  std::size_t size() const { return f.rho.size(); }
  double delta_rho(std::size_t k) const { return g.rho[k] - f.rho[k]; }
  double delta_xi(std::size_t k) const { return g.xi[k] - f.xi[k]; }
  double sum_rho(std::size_t k) const { return g.rho[k] + f.rho[k]; }
  double sum_xi(std::size_t k) const { return g.xi[k] + f.xi[k]; }
  // |exp(rho_f + rho_g) sin(xi_g - xi_f) - 1|, zero for the exact flow.
  double wronskian_defect(std::size_t k) const;
};

FundamentalPair fundamental_pair(const BesselParams& params, const ShiftParams& shift, const RealPath& noise,
                                 const PolarOptions& options = {});
FundamentalPair fundamental_pair(const BesselParams& params, const ShiftParams& shift, const RngSeed& seed,
                                 const TimeGrid& grid, const PolarOptions& options = {});

struct SolutionValue {
  double value;
  double derivative;
};

// (f(eta), f'(eta)) at node k, eta = 2 s_k, reconstructed from the polar pair.
SolutionValue solutions_from_polar(const PolarPair& pair, const ShiftParams& shift, const RealPath& noise,
                                   const BesselParams& params, std::size_t k);

struct BesselMatrix {
  Mat2 full;
  // Extended precision: its entries grow like 1 / Im of the hyperbolic point,
  // and the identity det = c^2/4 is checked at absolute accuracy.
  Mat2L hyperbolic;
  Mat2 oscillatory;
};

// full is c v v^T with v = (e^{rho_g} cos xi_g, e^{rho_f} cos xi_f), which is
// eta' (B o eta) written in polar coordinates; hyperbolic and oscillatory are
// the two parts of its decomposition obtained with the Wronskian identity, so
// full - hyperbolic - oscillatory vanishes up to the Wronskian defect.
BesselMatrix bessel_matrix(const FundamentalPair& pair, std::size_t k, const ShiftParams& shift);

// Native-time field eta' (B o eta) on nodes 0..=last.
CoefficientMatrixField bessel_field(const FundamentalPair& pair, const ShiftParams& shift, std::size_t last);

struct BesselReference {
  double f, fp, g, gp;
};

// beta = infinity closed form f(t) = e^{a t/2} (C J_a(x) + C' Y_a(x)), x = 2 sqrt(E) e^{-t/2},
// matched to (f, f') = (1, 0) and (g, g') = (0, 1) at t = 0.
BesselReference deterministic_bessel_reference(double a, double E, double t);

// Cumulative trapezoid of exp(a s + (2/sqrt(beta)) B(s)) on B's grid.
std::vector<double> varpi_path(const RealPath& B, const BesselParams& params);
double varpi(double t, const RealPath& B, const BesselParams& params);

enum class WeylType { limit_circle_infinity, limit_point_infinity };
WeylType weyl_classification(const BesselParams& params);

struct WeylBound {
  double C_w;        // sup w(t) e^{(1+a-delta) t}
  double C_varpi_w;  // sup varpi(t)^2 w(t) e^{(1-a-3 delta) t}
};
WeylBound weyl_bound_check(const RealPath& B, const BesselParams& params, double delta, double T);

// Unshifted operator: G_E f = E f becomes G~ f~ = f~ with t -> t + log E and
// B~(t) = B(t + log E) - B(log E).
struct UnshiftMap {
  double E;
  double time_shift;
  cplx eigenparameter(cplx z) const { return 1.0 + z / (2.0 * std::sqrt(E)); }
  // B~ on the nodes of B at or after log E, with times shifted to start at 0.
  RealPath translated(const RealPath& B_original) const;
};
UnshiftMap unshift_solution(const ShiftParams& shift);

// Reversed-time polar coordinates (r, xi) on [1, T].
struct ReversedPolar {
  TimeGrid grid;
  std::vector<double> r;
  std::vector<double> xi;
  double lambda = 1.0;
};

struct ReversedInit {
  double r1;
  double xi1;
};

// (r(1), xi(1)) reproducing (f(-1), f'(-1)) through reversed_solution exactly.
ReversedInit reversed_initial(double lambda, double f_m1, double fp_m1);

ReversedPolar integrate_reversed_polar(const BesselParams& params, double lambda, const ReversedInit& init,
                                       const RealPath& noise, SdeScheme scheme = SdeScheme::milstein_heun);

// (f(-t), f'(-t)) at node k: f(-t) = lambda^{-1/4} e^{r - t/4} cos xi, f'(-t) = -lambda^{1/4} e^{r + t/4} sin xi.
SolutionValue reversed_solution(const ReversedPolar& rp, std::size_t k);

// Grid policy on [1, T] for the reversed rotation sqrt(lambda) e^{t/2}.
GridPolicy reversed_grid_policy(double lambda, double phase_cap, double max_step, double min_step);

}  // namespace eb
