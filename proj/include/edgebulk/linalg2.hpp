#pragma once

// Closed-form 2x2 linear algebra used by every canonical-system routine.

#include <array>
#include <cmath>
#include <complex>
#include <type_traits>

namespace eb {

using cplx = std::complex<double>;

template <class T>
using Vec2T = std::array<T, 2>;
using Vec2 = Vec2T<double>;
using CVec2 = Vec2T<cplx>;

// Row-major [[a, b], [c, d]].
template <class T>
struct Mat2T {
  T a{}, b{}, c{}, d{};

  static Mat2T identity() { return {T(1), T(0), T(0), T(1)}; }
  T det() const { return a * d - b * c; }
  T trace() const { return a + d; }
  Mat2T transpose() const { return {a, c, b, d}; }

  Mat2T operator*(const Mat2T& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Vec2T<T> operator*(const Vec2T<T>& v) const { return {a * v[0] + b * v[1], c * v[0] + d * v[1]}; }
  Mat2T operator+(const Mat2T& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2T operator-(const Mat2T& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
  Mat2T operator*(T s) const { return {a * s, b * s, c * s, d * s}; }
  // Inverse through the adjugate; callers guarantee det != 0.
  Mat2T inverse() const {
    const T dt = det();
    return {d / dt, -b / dt, -c / dt, a / dt};
  }
};

using Mat2 = Mat2T<double>;
using CMat2 = Mat2T<cplx>;
using Mat2L = Mat2T<long double>;

inline CMat2 to_complex(const Mat2& m) { return {m.a, m.b, m.c, m.d}; }

// Eigenvalues (min, max) of a real symmetric matrix [[a, b], [b, d]].
inline std::array<double, 2> sym_eigenvalues(const Mat2& m) {
  const double mean = 0.5 * (m.a + m.d);
  const double r = std::hypot(0.5 * (m.a - m.d), 0.5 * (m.b + m.c));
  return {mean - r, mean + r};
}

// f(M) for symmetric M via its rotation eigenbasis; f is applied to each eigenvalue.
template <class F>
Mat2 sym_function(const Mat2& m, F&& f) {
  const double off = 0.5 * (m.b + m.c);
  const double theta = 0.5 * std::atan2(2.0 * off, m.a - m.d);
  const double cs = std::cos(theta), sn = std::sin(theta);
  const auto ev = sym_eigenvalues(m);
  // The eigenvector (cs, sn) belongs to the larger eigenvalue for this choice of theta.
  const double l1 = f(ev[1]), l2 = f(ev[0]);
  return {cs * cs * l1 + sn * sn * l2, cs * sn * (l1 - l2), cs * sn * (l1 - l2),
          sn * sn * l1 + cs * cs * l2};
}

namespace detail {

template <class T>
inline void cosh_sinhc(const T& mu2, T& ch, T& shc) {
  if (std::abs(mu2) < 1e-6) {
    ch = T(1) + mu2 * (T(0.5) + mu2 * (T(1.0 / 24.0) + mu2 * T(1.0 / 720.0)));
    shc = T(1) + mu2 * (T(1.0 / 6.0) + mu2 * (T(1.0 / 120.0) + mu2 * T(1.0 / 5040.0)));
    return;
  }
  if constexpr (std::is_same_v<T, double>) {
    if (mu2 > 0) {
      const double mu = std::sqrt(mu2);
      ch = std::cosh(mu);
      shc = std::sinh(mu) / mu;
    } else {
      const double nu = std::sqrt(-mu2);
      ch = std::cos(nu);
      shc = std::sin(nu) / nu;
    }
  } else {
    const T mu = std::sqrt(mu2);
    ch = std::cosh(mu);
    shc = std::sinh(mu) / mu;
  }
}

}  // namespace detail

// exp(A) for a traceless 2x2 matrix: A^2 = mu^2 I, so exp(A) = cosh(mu) I + sinh(mu)/mu A.
// The result is unimodular up to rounding.
template <class T>
Mat2T<T> expm_traceless(const Mat2T<T>& A) {
  const T mu2 = A.a * A.a + A.b * A.c;
  T ch, shc;
  detail::cosh_sinhc(mu2, ch, shc);
  return {ch + shc * A.a, shc * A.b, shc * A.c, ch + shc * A.d};
}

// Generator z J H dt of the canonical system J u' = -z H u, J = [[0, -1], [1, 0]].
template <class T>
Mat2T<T> canonical_generator(const Mat2& H, const T& z_dt) {
  const double h12 = 0.5 * (H.b + H.c);
  return {-h12 * z_dt, -H.d * z_dt, H.a * z_dt, h12 * z_dt};
}

}  // namespace eb
