#pragma once

// Scalar-noise SDE kernel with an exactly integrated deterministic rotation.
//
// One step over [t, t+h] is the symmetric composition
//   rotate(t, t+h/2) ; stochastic step at time t ; rotate(t+h/2, t+h).
// The stochastic step is Euler-Maruyama, optionally with the derivative-free
// Milstein correction (b(x + a h + b sqrt h) - b(x)) (dW^2 - h) / (2 sqrt h).
// milstein_heun additionally averages the drift over the Euler predictor, which
// makes the zero-noise limit second order while keeping strong order one.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "edgebulk/errors.hpp"
#include "edgebulk/grid.hpp"
#include "edgebulk/paths.hpp"

namespace eb {

enum class SdeScheme { euler_maruyama, milstein, milstein_heun };

template <std::size_t N>
using SdeState = std::array<double, N>;

struct NoRotation {
  template <class S>
  S operator()(const S& x, double, double) const {
    return x;
  }
};

template <std::size_t N, class Drift, class Diffusion, class Rotation>
std::vector<SdeState<N>> integrate_sde(const Drift& drift, const Diffusion& diffusion, const Rotation& rotation,
                                       const SdeState<N>& init, const TimeGrid& grid, const RealPath& noise,
                                       SdeScheme scheme = SdeScheme::euler_maruyama) {
  if (!(noise.grid == grid)) throw ConfigError("integrate_sde: noise must be sampled on the integration grid");
  std::vector<SdeState<N>> out(grid.size());
  out[0] = init;
  SdeState<N> x = init;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double t = grid[k];
    const double h = grid.gap(k);
    const double tm = t + 0.5 * h;
    const double dw = noise.values[k + 1] - noise.values[k];
    x = rotation(x, t, tm);
    const SdeState<N> a = drift(x, t);
    const SdeState<N> b = diffusion(x, t);
    SdeState<N> next;
    if (scheme != SdeScheme::euler_maruyama) {
      const double sh = std::sqrt(h);
      SdeState<N> support;
      for (std::size_t i = 0; i < N; ++i) support[i] = x[i] + a[i] * h + b[i] * sh;
      const SdeState<N> bs = diffusion(support, t);
      const double q = (dw * dw - h) / (2.0 * sh);
      SdeState<N> drift_step = a;
      if (scheme == SdeScheme::milstein_heun) {
        SdeState<N> pred;
        for (std::size_t i = 0; i < N; ++i) pred[i] = x[i] + a[i] * h + b[i] * dw;
        const SdeState<N> ap = drift(pred, t + h);
        for (std::size_t i = 0; i < N; ++i) drift_step[i] = 0.5 * (a[i] + ap[i]);
      }
      for (std::size_t i = 0; i < N; ++i) next[i] = x[i] + drift_step[i] * h + b[i] * dw + (bs[i] - b[i]) * q;
    } else {
      for (std::size_t i = 0; i < N; ++i) next[i] = x[i] + a[i] * h + b[i] * dw;
    }
    x = rotation(next, tm, t + h);
    for (std::size_t i = 0; i < N; ++i) {
      if (!std::isfinite(x[i])) throw IntegrationError("non-finite SDE state", grid[k + 1]);
    }
    out[k + 1] = x;
  }
  return out;
}

template <std::size_t N, class Drift, class Diffusion>
std::vector<SdeState<N>> integrate_sde(const Drift& drift, const Diffusion& diffusion, const SdeState<N>& init,
                                       const TimeGrid& grid, const RealPath& noise,
                                       SdeScheme scheme = SdeScheme::euler_maruyama) {
  return integrate_sde<N>(drift, diffusion, NoRotation{}, init, grid, noise, scheme);
}

}  // namespace eb
