#pragma once

#include <complex>
#include <vector>

#include "edgebulk/grid.hpp"
#include "edgebulk/rng.hpp"

namespace eb {

// Samples at grid nodes; linear interpolation is the off-node semantics.
template <class V>
struct SampledPath {
  TimeGrid grid;
  std::vector<V> values;

  V at(double t) const {
    const std::size_t k = grid.interval_of(t);
    const double w = (t - grid[k]) / grid.gap(k);
    return values[k] + (values[k + 1] - values[k]) * w;
  }
  V increment(std::size_t k) const { return values[k + 1] - values[k]; }
};

using RealPath = SampledPath<double>;
using ComplexPath = SampledPath<std::complex<double>>;

// Standard Brownian motion on the grid. One-sided grids must start at t0 >= 0
// (B(t0) ~ N(0, t0)); two-sided grids must contain 0 and the two halves are independent.
RealPath sample_brownian(const RngSeed& seed, const TimeGrid& grid, bool two_sided = false);

// Independent real and imaginary standard Brownian components.
ComplexPath sample_complex_brownian(const RngSeed& seed, const TimeGrid& grid);

// Values of a path at the nodes of a coarser grid whose nodes are all nodes of
// path.grid (bit-identical samples, no interpolation).
RealPath restrict_path(const RealPath& path, const TimeGrid& coarse);

// Zero path on a grid (deterministic control runs).
RealPath zero_path(const TimeGrid& grid);

}  // namespace eb
