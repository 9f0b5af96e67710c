#include <cmath>

#include "edgebulk/bessel_system.hpp"
#include "edgebulk/errors.hpp"

namespace eb {

namespace {

// Z_a and Z_{a+1} for Z in {J, Y}.
struct BesselPair {
  double ja, ja1, ya, ya1;
};

BesselPair bessel_at(double a, double x) {
  BesselPair b{std::cyl_bessel_j(a, x), std::cyl_bessel_j(a + 1, x), std::cyl_neumann(a, x),
               std::cyl_neumann(a + 1, x)};
  if (!std::isfinite(b.ja) || !std::isfinite(b.ja1) || !std::isfinite(b.ya) || !std::isfinite(b.ya1)) {
    throw NumericError("Bessel function evaluation overflowed at x=" + std::to_string(x));
  }
  return b;
}

}  // namespace

BesselReference deterministic_bessel_reference(double a, double E, double t) {
  if (!(a > -1)) throw DomainError("deterministic_bessel_reference: a must exceed -1");
  if (!(E > 0)) throw DomainError("deterministic_bessel_reference: E must be positive");
  if (t == 0.0) return {1.0, 0.0, 0.0, 1.0};
  // With x = 2 sqrt(E) e^{-t/2}: f = e^{a t/2} Z_a(x) and f' = e^{a t/2} (x/2) Z_{a+1}(x).
  const double x0 = 2.0 * std::sqrt(E);
  const BesselPair b0 = bessel_at(a, x0);
  const double m11 = b0.ja, m12 = b0.ya, m21 = 0.5 * x0 * b0.ja1, m22 = 0.5 * x0 * b0.ya1;
  const double det = m11 * m22 - m12 * m21;
  // (C, C') for (value, derivative) = (1, 0) and (0, 1).
  const double cf = m22 / det, cfp = -m21 / det;
  const double cg = -m12 / det, cgp = m11 / det;
  const double x = x0 * std::exp(-0.5 * t);
  const BesselPair b = bessel_at(a, x);
  const double e = std::exp(0.5 * a * t);
  BesselReference r;
  r.f = e * (cf * b.ja + cfp * b.ya);
  r.fp = e * 0.5 * x * (cf * b.ja1 + cfp * b.ya1);
  r.g = e * (cg * b.ja + cgp * b.ya);
  r.gp = e * 0.5 * x * (cg * b.ja1 + cgp * b.ya1);
  return r;
}

}  // namespace eb
