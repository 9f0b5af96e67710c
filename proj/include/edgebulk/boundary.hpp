#pragma once

// Right boundary data of the shifted Bessel canonical system.
//
// The canonical vector of a Sturm-Liouville solution h is
//   u = (W[E^{-1/4} f, h], W[h, E^{1/4} g]),  W[y1, y2] = p (y1 y2' - y1' y2),
// so a boundary condition at the right end is the vector u of the solution h
// that is selected there.

#include <cstddef>

#include "edgebulk/bessel_system.hpp"
#include "edgebulk/spectral.hpp"

namespace eb {

// First node with clock >= min_clock where w(eta) = p(eta) e^{-eta} < w_threshold.
// Throws HorizonError when the pair ends before the threshold is crossed.
std::size_t bessel_horizon_node(const FundamentalPair& pair, const BesselParams& params, double w_threshold = 1e-8,
                                double min_clock = 0.0);

struct LcBoundary {
  BoundaryData data;
  std::size_t node;
  double clock;
};

// Vector of the solution with p h' = 0 at `node`, used as the truncation
// boundary whenever the right end is read at a finite horizon.
LcBoundary bessel_truncation_boundary(const FundamentalPair& pair, std::size_t node);

// Limit-circle case |a| < 1: h with p h' = 0 at the horizon node (the Neumann
// condition at infinity read at a finite horizon). Then u is proportional to
// (-e^{rho_f} sin xi_f, e^{rho_g} sin xi_g).
LcBoundary bessel_right_boundary_lc(const FundamentalPair& pair, const BesselParams& params, std::size_t node);

// Noise of the unshifted operator, B~(t) = B(t + log E) - B(log E), sampled on
// [0, horizon] with a uniform step. Increments after log E are independent of
// everything the shifted system sees, so a dedicated stream is used.
RealPath unshifted_noise(const RngSeed& seed, double horizon, double step);

struct BetaGt2Options {
  double horizon = 20.0;   // T_Phi in unshifted time
  double degenerate_tol = 1e-10;
};

// beta > 2, a >= 1: Phi solves the unshifted equation at eigenparameter
// 1 + z / (2 sqrt E), obtained by backward integration from the horizon with
// (Phi, p Phi') = (1, 0). Normalized so that W[h, E^{1/4} g] = 1 at log E, the
// boundary vector is (W[E^{-1/4} f, h], 1) evaluated from the last node of the pair.
BoundaryData bessel_right_boundary_beta_gt2(const BesselParams& params, const ShiftParams& shift,
                                            const FundamentalPair& pair, const RealPath& unshifted,
                                            const BetaGt2Options& options = {});

// The same vector at a single z (exposed for diagnostics and tests).
CVec2 beta_gt2_vector(const BesselParams& params, const ShiftParams& shift, const FundamentalPair& pair,
                      const RealPath& unshifted, cplx z, const BetaGt2Options& options = {});

}  // namespace eb
