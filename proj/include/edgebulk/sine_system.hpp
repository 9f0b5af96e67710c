#pragma once

#include <vector>

#include "edgebulk/field.hpp"
#include "edgebulk/paths.hpp"

namespace eb {

// Hyperbolic Brownian motion B = x + i y in logarithmic time.
struct HyperbolicPath {
  TimeGrid grid;
  std::vector<double> x;
  std::vector<double> y;
};

struct SineBoundary {
  Vec2 vector{0.0, 1.0};
  double horizon = 0.0;
};

// dB = (2/sqrt(beta)) Im(B) dW from B(0) = i. log y is advanced exactly,
// log y(s) = (2/sqrt(beta)) Im W(s) - (2/beta) s, and x by the Ito sum of y dRe W.
// beta = infinity freezes the path at i.
HyperbolicPath simulate_hbm(double beta, const ComplexPath& noise);

// R = (1/(2y)) [[1, -x], [-x, x^2 + y^2]].
Mat2 sine_matrix(double x, double y);

// t -> R(B(upsilon(t))) on native time, for nodes with t <= t_max.
CoefficientMatrixField sine_field(const HyperbolicPath& path, double t_max);
CoefficientMatrixField sine_field(const HyperbolicPath& path);

// (x at the last node, 1) as the estimate of (Re B(inf), 1). Only meaningful for beta > 2.
SineBoundary sine_right_boundary(const HyperbolicPath& path, double beta);

}  // namespace eb
