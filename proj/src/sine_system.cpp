#include "edgebulk/sine_system.hpp"

#include <cmath>

#include "edgebulk/errors.hpp"
#include "edgebulk/grid.hpp"

namespace eb {

HyperbolicPath simulate_hbm(double beta, const ComplexPath& noise) {
  if (!(beta > 0)) throw DomainError("simulate_hbm: beta must be positive");
  if (noise.grid.front() != 0.0) throw DomainError("simulate_hbm: noise grid must start at 0");
  const std::size_t n = noise.grid.size();
  HyperbolicPath out{noise.grid, std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)};
  if (std::isinf(beta)) return out;
  const double amp = 2.0 / std::sqrt(beta);
  const double drift = 2.0 / beta;
  double logy = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const std::complex<double> dw = noise.values[k + 1] - noise.values[k];
    out.x[k + 1] = out.x[k] + amp * out.y[k] * dw.real();
    logy += amp * dw.imag() - drift * noise.grid.gap(k);
    out.y[k + 1] = std::exp(logy);
  }
  return out;
}

Mat2 sine_matrix(double x, double y) {
  if (!(y > 0)) throw DomainError("sine_matrix: y must be positive");
  const double s = 0.5 / y;
  return {s, -x * s, -x * s, (x * x + y * y) * s};
}

CoefficientMatrixField sine_field(const HyperbolicPath& path, double t_max) {
  const double s_max = log_time(t_max, 1.0);
  if (s_max > path.grid.back() * (1.0 + 1e-12)) throw RangeError("sine_field: t_max beyond the noise horizon");
  std::vector<double> s;
  std::vector<Mat2> H;
  for (std::size_t k = 0; k < path.grid.size() && path.grid[k] < s_max; ++k) {
    s.push_back(path.grid[k]);
    H.push_back(sine_matrix(path.x[k], path.y[k]));
  }
  if (s_max > s.back()) {
    // Close the field exactly at t_max by interpolating x and log y.
    const std::size_t k = path.grid.interval_of(std::min(s_max, path.grid.back()));
    const double w = (s_max - path.grid[k]) / path.grid.gap(k);
    const double x = path.x[k] + w * (path.x[k + 1] - path.x[k]);
    const double ly = std::log(path.y[k]) + w * (std::log(path.y[k + 1]) - std::log(path.y[k]));
    s.push_back(s_max);
    H.push_back(sine_matrix(x, std::exp(ly)));
  }
  return field_from_log_clock(s, 1.0, std::move(H));
}

CoefficientMatrixField sine_field(const HyperbolicPath& path) {
  std::vector<Mat2> H(path.grid.size());
  for (std::size_t k = 0; k < H.size(); ++k) H[k] = sine_matrix(path.x[k], path.y[k]);
  return field_from_log_clock(path.grid.nodes(), 1.0, std::move(H));
}

SineBoundary sine_right_boundary(const HyperbolicPath& path, double beta) {
  if (!(beta > 2)) throw UsageError("sine_right_boundary: B(inf) is only read for beta > 2");
  return SineBoundary{{path.x.back(), 1.0}, path.grid.back()};
}

}  // namespace eb
