#pragma once

// Direct integration of -(p f')' = zeta w f in original time for a given
// Brownian path, in the variables (f, q = p f'). Between nodes B is linear, so
// the step generator [[0, int 1/p], [-zeta int w, 0]] is integrated in closed
// form and exponentiated exactly; the Wronskian p (f g' - f' g) is preserved.

#include <vector>

#include "edgebulk/bessel_system.hpp"
#include "edgebulk/linalg2.hpp"

namespace eb {

struct SlState {
  cplx f;
  cplx q;  // p f'
};

// Forward from the first node (or backward from the last when backward = true).
std::vector<SlState> integrate_sl(const BesselParams& params, cplx zeta, const RealPath& B, const SlState& init,
                                  bool backward = false);

}  // namespace eb
