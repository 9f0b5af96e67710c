#include <doctest.h>

#include <cmath>

#include "edgebulk/errors.hpp"
#include "edgebulk/sde.hpp"

using namespace eb;

namespace {
TimeGrid uniform(double t1, std::size_t n) {
  std::vector<double> v(n + 1);
  for (std::size_t k = 0; k <= n; ++k) v[k] = t1 * static_cast<double>(k) / static_cast<double>(n);
  return TimeGrid(v);
}
}  // namespace

TEST_CASE("zero coefficients keep the state constant") {
  const TimeGrid g = uniform(1.0, 10);
  const RealPath w = sample_brownian({1, 0, 0}, g);
  auto zero = [](const SdeState<2>&, double) { return SdeState<2>{0.0, 0.0}; };
  const auto out = integrate_sde<2>(zero, zero, SdeState<2>{1.5, -2.0}, g, w);
  for (const auto& x : out) CHECK(x == SdeState<2>{1.5, -2.0});
}

TEST_CASE("linear decay matches the exact ODE solution") {
  const TimeGrid g = uniform(1.0, 1000);
  const RealPath w = zero_path(g);
  auto drift = [](const SdeState<1>& x, double) { return SdeState<1>{-x[0]}; };
  auto none = [](const SdeState<1>&, double) { return SdeState<1>{0.0}; };
  for (auto scheme : {SdeScheme::euler_maruyama, SdeScheme::milstein_heun}) {
    const auto out = integrate_sde<1>(drift, none, SdeState<1>{1.0}, g, w, scheme);
    CHECK(std::abs(out.back()[0] - std::exp(-1.0)) <= 1e-3);
  }
}

TEST_CASE("a pure rotation handled by splitting is exact for any step") {
  const double omega = 37.0;
  const TimeGrid g = uniform(2.0, 3);
  const RealPath w = zero_path(g);
  auto zero = [](const SdeState<1>&, double) { return SdeState<1>{0.0}; };
  auto rot = [omega](const SdeState<1>& x, double t0, double t1) { return SdeState<1>{x[0] - omega * (t1 - t0)}; };
  const auto out = integrate_sde<1>(zero, zero, rot, SdeState<1>{0.25}, g, w);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(out[k][0] == doctest::Approx(0.25 - omega * g[k]).epsilon(1e-15));
}

TEST_CASE("geometric noise keeps its mean") {
  const TimeGrid g = uniform(1.0, 50);
  auto drift = [](const SdeState<1>&, double) { return SdeState<1>{0.0}; };
  auto diff = [](const SdeState<1>& x, double) { return SdeState<1>{x[0]}; };
  const int n = 10000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const RealPath w = sample_brownian({2, 0, static_cast<std::uint64_t>(i)}, g);
    const double x = integrate_sde<1>(drift, diff, SdeState<1>{1.0}, g, w).back()[0];
    s += x;
    s2 += x * x;
  }
  const double m = s / n, se = std::sqrt((s2 / n - m * m) / n);
  CHECK(std::abs(m - 1.0) <= 3 * se);
}

TEST_CASE("non-finite states raise an integration error with the failing time") {
  const TimeGrid g = uniform(1.0, 4);
  const RealPath w = zero_path(g);
  auto blow = [](const SdeState<1>& x, double) { return SdeState<1>{x[0] * 1e300}; };
  auto none = [](const SdeState<1>&, double) { return SdeState<1>{0.0}; };
  try {
    integrate_sde<1>(blow, none, SdeState<1>{1e10}, g, w);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.time() == doctest::Approx(0.25));
  }
}

TEST_CASE("noise on another grid is rejected") {
  auto zero = [](const SdeState<1>&, double) { return SdeState<1>{0.0}; };
  CHECK_THROWS_AS(integrate_sde<1>(zero, zero, SdeState<1>{0.0}, uniform(1.0, 4), zero_path(uniform(1.0, 5))),
                  ConfigError);
}
