#include "edgebulk/sturm_liouville.hpp"

#include <cmath>

namespace eb {

namespace {

// int over a step of exp(u) with u linear from u0 to u1.
double exp_linear_integral(double u0, double u1, double h) {
  const double du = u1 - u0;
  const double ratio = std::abs(du) < 1e-12 ? 1.0 + 0.5 * du : std::expm1(du) / du;
  return h * std::exp(u0) * ratio;
}

}  // namespace

std::vector<SlState> integrate_sl(const BesselParams& params, cplx zeta, const RealPath& B, const SlState& init,
                                  bool backward) {
  params.validate();
  const double amp = params.noise_amp();
  const std::size_t n = B.grid.size();
  std::vector<SlState> out(n);
  auto step = [&](std::size_t k) {
    const double t0 = B.grid[k], t1 = B.grid[k + 1], h = t1 - t0;
    const double inv_p = exp_linear_integral(params.a * t0 + amp * B.values[k],
                                             params.a * t1 + amp * B.values[k + 1], h);
    const double w = exp_linear_integral(-(params.a + 1) * t0 - amp * B.values[k],
                                         -(params.a + 1) * t1 - amp * B.values[k + 1], h);
    return CMat2{0.0, inv_p, -zeta * w, 0.0};
  };
  if (!backward) {
    out[0] = init;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const CMat2 M = expm_traceless(step(k));
      out[k + 1] = {M.a * out[k].f + M.b * out[k].q, M.c * out[k].f + M.d * out[k].q};
    }
  } else {
    out[n - 1] = init;
    for (std::size_t k = n - 1; k-- > 0;) {
      const CMat2 M = expm_traceless(step(k) * cplx(-1.0));
      out[k] = {M.a * out[k + 1].f + M.b * out[k + 1].q, M.c * out[k + 1].f + M.d * out[k + 1].q};
    }
  }
  return out;
}

}  // namespace eb
