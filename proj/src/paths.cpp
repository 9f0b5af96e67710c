#include "edgebulk/paths.hpp"

#include <cmath>

#include "edgebulk/errors.hpp"

namespace eb {

namespace {

std::vector<double> brownian_values(CounterRng& rng, const TimeGrid& grid, bool two_sided) {
  const auto& t = grid.nodes();
  std::vector<double> v(t.size(), 0.0);
  std::size_t origin = 0;
  if (two_sided) {
    origin = grid.find_node(0.0, 0.0);
    if (origin == TimeGrid::npos) throw DomainError("two-sided Brownian grid must contain 0");
  } else {
    if (t.front() < 0) throw DomainError("one-sided Brownian grid must start at t >= 0");
    v[0] = t.front() > 0 ? std::sqrt(t.front()) * rng.normal() : 0.0;
  }
  for (std::size_t k = origin + 1; k < t.size(); ++k) v[k] = v[k - 1] + std::sqrt(t[k] - t[k - 1]) * rng.normal();
  for (std::size_t k = origin; k-- > 0;) v[k] = v[k + 1] + std::sqrt(t[k + 1] - t[k]) * rng.normal();
  return v;
}

}  // namespace

RealPath sample_brownian(const RngSeed& seed, const TimeGrid& grid, bool two_sided) {
  CounterRng rng(seed);
  return RealPath{grid, brownian_values(rng, grid, two_sided)};
}

ComplexPath sample_complex_brownian(const RngSeed& seed, const TimeGrid& grid) {
  CounterRng rng(seed);
  const auto re = brownian_values(rng, grid, false);
  const auto im = brownian_values(rng, grid, false);
  std::vector<std::complex<double>> v(re.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = {re[k], im[k]};
  return ComplexPath{grid, std::move(v)};
}

RealPath restrict_path(const RealPath& path, const TimeGrid& coarse) {
  std::vector<double> v(coarse.size());
  std::size_t j = 0;
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    while (j < path.grid.size() && path.grid[j] != coarse[k]) ++j;
    if (j == path.grid.size()) throw DomainError("restrict_path: coarse node missing from the path grid");
    v[k] = path.values[j];
  }
  return RealPath{coarse, std::move(v)};
}

RealPath zero_path(const TimeGrid& grid) { return RealPath{grid, std::vector<double>(grid.size(), 0.0)}; }

}  // namespace eb
