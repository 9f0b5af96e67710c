#pragma once

// Construction of a complex Brownian motion W from the real clock noise that
// drives the Bessel phases, following the rotation argument: on a partition
// that is uniform in logarithmic time the deterministic-phase integrals
// Btheta_j are whitened and rotated by the phase lag of xi_g at the left end of
// the interval, which makes the W_j independent CN(0, sigma_j^2).

#include <vector>

#include "edgebulk/bessel_system.hpp"
#include "edgebulk/paths.hpp"

namespace eb {

struct CouplingConfig {
  double alpha = 0.3;
  double delta = 0.05;

  double p() const { return 2.0 * alpha / 3.0; }
  void validate() const;
};

struct CouplingPartition {
  std::vector<double> s;  // logarithmic clock, s_j = j sigma2 for j < N, s_N = 0.5 log E
  std::vector<double> t;  // native times, c t_j = 1 - (1 + E^{-p})^{-j}
  std::size_t N = 0;
  double sigma2 = 0.0;
  double E = 0.0;
  double c = 1.0;

  // theta = pi/2 - 2 c sqrt(E) t written on the clock.
  double theta_clock(double s_value) const;
};

CouplingPartition coupling_partition(const ShiftParams& shift, const CouplingConfig& config);

struct CouplingInterval {
  cplx B_theta;
  Mat2 Sigma;
  double length;  // clock length, sigma2 except possibly for the last interval
  cplx W_j;
};

struct CoupledNoise {
  RealPath clock_noise;
  ComplexPath W;  // on the clock grid of the noise
  std::vector<CouplingInterval> intervals;
  std::vector<std::size_t> pin_nodes;
  double sigma2 = 0.0;
};

// Break points for a clock grid that refines the partition and optionally extends to clock_end.
std::vector<double> coupling_breaks(const CouplingPartition& partition, double clock_end);

// W on the full noise grid. Past the last pin W continues as an independent
// complex Brownian motion drawn from the fill stream.
CoupledNoise build_coupled_w(const RealPath& clock_noise, const PolarPair& g, const CouplingPartition& partition,
                             const ShiftParams& shift, const RngSeed& fill_seed);

// Cumulative Ito sums of i exp(-2 i xi) sqrt(2) dBhat, the clock form of
// int i e^{-2 i xi} sqrt(2c/(1-cs)) dB_E.
ComplexPath oscillatory_integral_path(const PolarPair& pair, const RealPath& clock_noise);
cplx oscillatory_integral(const PolarPair& pair, const RealPath& clock_noise, double s);

// Clock time (1/2 - alpha) log E of the comparison window end c t = 1 - E^{-1/2+alpha}.
double coupling_window_clock(const ShiftParams& shift, const CouplingConfig& config);

double deviation_sup(const CoupledNoise& coupled, const PolarPair& g, const ShiftParams& shift,
                     const CouplingConfig& config);

// sup over native t <= window_end of |int_0^t e^{i k xi} c/(1 - c s) ds|, i.e. of the clock
// integral of e^{i k xi}; xi is taken linear between nodes.
double averaging_sup(const PolarPair& pair, int k, const ShiftParams& shift, double window_end);

// Z = exp((2/sqrt(beta)) Im W - (2/beta) s) on the clock grid.
RealPath gbm_reference(const CoupledNoise& coupled, const BesselParams& params);

struct GbmComparison {
  double sup_log;
  double sup_lin;
};

GbmComparison gbm_compare(const PolarPair& g, const CoupledNoise& coupled, const BesselParams& params,
                          const ShiftParams& shift, const CouplingConfig& config);

double rehbm_compare(const FundamentalPair& pair, const CoupledNoise& coupled, const BesselParams& params,
                     const ShiftParams& shift, const CouplingConfig& config);

}  // namespace eb
