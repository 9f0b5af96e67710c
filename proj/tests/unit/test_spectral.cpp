#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "edgebulk/errors.hpp"
#include "edgebulk/sine_system.hpp"
#include "edgebulk/spectral.hpp"

using namespace eb;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const CoefficientMatrixField> constant_field(double b, std::size_t n, const Mat2& H) {
  auto f = std::make_shared<CoefficientMatrixField>();
  for (std::size_t k = 0; k <= n; ++k) {
    f->t.push_back(b * static_cast<double>(k) / static_cast<double>(n));
    f->H.push_back(H);
  }
  for (std::size_t k = 0; k < n; ++k) f->dt.push_back(f->t[k + 1] - f->t[k]);
  f->closed_right = true;
  return f;
}

std::shared_ptr<const CoefficientMatrixField> free_field(double b = kPi, std::size_t n = 400) {
  return constant_field(b, n, Mat2::identity());
}

CoefficientMatrixField random_sine_field(std::uint64_t path, double horizon = 6.0) {
  GridPolicy p;
  p.max_step = 0.01;
  const TimeGrid g = make_grid(0.0, horizon, p, TimeScale::log_time);
  return sine_field(simulate_hbm(2.0, sample_complex_brownian({17, 5, path}, g)));
}

}  // namespace

TEST_CASE("transfer matrix of the free system") {
  const auto H = free_field(2.0, 100);
  const CMat2 t0 = transfer_matrix(*H, 2.0, 0.0).value;
  CHECK(std::abs(t0.a - 1.0) + std::abs(t0.b) + std::abs(t0.c) + std::abs(t0.d - 1.0) <= 1e-15);
  const CMat2 t = transfer_matrix(*H, 2.0, kPi).value;
  CHECK(std::abs(t.a - 1.0) <= 1e-12);
  CHECK(std::abs(t.b) <= 1e-12);
  CHECK(std::abs(t.c) <= 1e-12);
  // exp(z J t) = [[cos zt, -sin zt], [sin zt, cos zt]] at an interior point.
  const cplx z(0.7, 0.2);
  const CMat2 m = transfer_matrix(*H, 1.3, z).value;
  CHECK(std::abs(m.a - std::cos(z * 1.3)) <= 1e-12);
  CHECK(std::abs(m.b + std::sin(z * 1.3)) <= 1e-12);
  CHECK(std::abs(m.c - std::sin(z * 1.3)) <= 1e-12);
  CHECK_THROWS_AS(transfer_matrix(*H, 2.5, z), RangeError);
}

TEST_CASE("transfer matrices are unimodular and real on the real axis") {
  for (std::uint64_t path = 0; path < 5; ++path) {
    const CoefficientMatrixField f = random_sine_field(path);
    const TransferMatrix t = transfer_matrix(f, f.right(), cplx(1.0, 2.0));
    CHECK(std::abs(t.value.det() - 1.0) <= 1e-8);
    const CMat2 r = transfer_matrix(f, 0.5 * f.right(), cplx(3.0, 0.0)).value;
    for (cplx v : {r.a, r.b, r.c, r.d}) CHECK(std::abs(v.imag()) <= 1e-12);
    const Mat2 rr = transfer_matrix_real(f, 3.0);
    const CMat2 full = transfer_matrix(f, f.right(), cplx(3.0, 0.0)).value;
    CHECK(std::abs(rr.a - full.a.real()) <= 1e-9 * (1 + std::abs(rr.a)));
  }
}

TEST_CASE("limit-circle m of the free system is -cot(pi z)") {
  const auto H = free_field();
  const WeylEvaluator m = weyl_m_limit_circle(H, BoundaryData::from_vector({1.0, 0.0}));
  const cplx mi = m(cplx(0.0, 1.0));
  CHECK(std::abs(mi - cplx(0.0, 1.0 / std::tanh(kPi))) <= 1e-6);
  for (cplx z : {cplx(0.3, 0.5), cplx(-2.2, 0.1), cplx(4.0, 1.0)}) {
    CHECK(std::abs(m(z) + std::cos(kPi * z) / std::sin(kPi * z)) <= 1e-5 * std::abs(m(z)));
    CHECK(std::abs(m(std::conj(z)) - std::conj(m(z))) <= 1e-10 * std::abs(m(z)));
  }
}

TEST_CASE("m is infinite when the second component of T^-1 w vanishes") {
  const cplx v = weyl_m_from_transfer(CMat2::identity(), {cplx(1.0), cplx(0.0)});
  CHECK(std::isinf(v.real()));
}

TEST_CASE("limit-point evaluation of the free half line") {
  const auto H = free_field(30.0, 6000);
  std::vector<double> schedule;
  for (double b = 2.0; b <= 30.0; b += 2.0) schedule.push_back(b);
  const LimitPointValue lp = weyl_m_limit_point(*H, {0.0, 0.5 * kPi}, schedule, cplx(0.0, 1.0), 1e-6);
  CHECK(lp.certified);
  CHECK(std::abs(lp.value - cplx(0.0, 1.0)) <= 1e-6);
  CHECK(lp.value.imag() >= -1e-9);
  for (std::size_t i = 1; i < lp.disagreements.size(); ++i)
    CHECK(lp.disagreements[i] <= lp.disagreements[i - 1] * (1 + 1e-9));
}

TEST_CASE("Stieltjes inversion on closed-form m functions") {
  const double l0 = 0.4;
  const WeylEvaluator pole = [l0](cplx z) { return 1.0 / (l0 - z); };
  CHECK(stieltjes_atom(pole, l0, {1e-3, 1e-4}).mass == doctest::Approx(1.0).epsilon(1e-9));
  const WeylEvaluator cot = [](cplx z) { return -std::cos(kPi * z) / std::sin(kPi * z); };
  CHECK(std::abs(stieltjes_atom(cot, 3.0, {1e-3, 1e-4}).mass - 1.0 / kPi) <= 1e-4);
  const WeylEvaluator id = [](cplx z) { return z; };
  CHECK(std::abs(stieltjes_atom(id, 1.7, {1e-3, 1e-4}).mass) <= 1e-10);
}

TEST_CASE("free system spectrum and masses") {
  const auto H = free_field();
  const BoundaryData w = BoundaryData::from_vector({1.0, 0.0});
  const auto ev = eigenvalues(*H, w, -5.5, 5.5, 0.1);
  REQUIRE(ev.size() == 11);
  for (int k = -5; k <= 5; ++k) CHECK(std::abs(ev[static_cast<std::size_t>(k + 5)] - k) <= 1e-8);
  CHECK(eigenvalues(*H, w, 0.2, 0.8, 0.05).empty());
  const SpectralMeasure mu = spectral_measure(H, w, -5.5, 5.5, 0.1, {1e-3, 1e-4});
  REQUIRE(mu.atoms.size() == 11);
  for (const auto& a : mu.atoms) CHECK(std::abs(a.mass - 1.0 / kPi) <= 1e-4);
  // A different schedule gives the same masses within 5%.
  const WeylEvaluator m = weyl_m_limit_circle(H, w);
  for (const auto& a : mu.atoms)
    CHECK(stieltjes_atom(m, a.location, {2e-3, 5e-4}).mass == doctest::Approx(a.mass).epsilon(0.05));
}

TEST_CASE("a coarse scan that skips roots is refused") {
  const auto H = free_field();
  CHECK_THROWS_AS(eigenvalues(*H, BoundaryData::from_vector({1.0, 0.0}), -5.5, 5.5, 2.0), ResolutionError);
  const auto bisected = eigenvalues(*H, BoundaryData::from_vector({1.0, 0.0}), -5.5, 5.5, 2.0, JumpPolicy::bisect);
  const auto fine = eigenvalues(*H, BoundaryData::from_vector({1.0, 0.0}), -5.5, 5.5, 0.1);
  REQUIRE(bisected.size() == fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) CHECK(std::abs(bisected[i] - fine[i]) <= 1e-9);
}

TEST_CASE("Pruefer argument is nondecreasing in lambda") {
  for (std::uint64_t path = 0; path < 3; ++path) {
    const CoefficientMatrixField f = random_sine_field(path);
    double prev = -INFINITY;
    for (double l = -10; l <= 10; l += 0.25) {
      const double a = prufer_endpoint(f, l).angle;
      CHECK(a >= prev - 1e-9);
      prev = a;
    }
  }
}

TEST_CASE("sine-field eigenvalues coincide with the atoms of m") {
  for (std::uint64_t path = 0; path < 3; ++path) {
    auto f = std::make_shared<CoefficientMatrixField>(random_sine_field(path));
    const BoundaryData w = BoundaryData::from_vector({0.3, 1.0});
    const auto ev = eigenvalues(*f, w, -30, 30, 0.25);
    const SpectralMeasure mu = spectral_measure(f, w, -30, 30, 0.25, {1e-3, 1e-4});
    CHECK(mu.atoms.size() == ev.size());
    const WeylEvaluator m = weyl_m_limit_circle(f, w);
    for (double r : ev) {
      // Golden-section search for the peak of Im m(t + i eps) near the root.
      const double eps = 1e-7, g = 0.5 * (std::sqrt(5.0) - 1);
      double a = r - 1e-3, b = r + 1e-3;
      for (int it = 0; it < 60; ++it) {
        const double x1 = b - g * (b - a), x2 = a + g * (b - a);
        if (m(cplx(x1, eps)).imag() > m(cplx(x2, eps)).imag()) b = x2;
        else a = x1;
      }
      CHECK(std::abs(0.5 * (a + b) - r) <= 1e-6);
    }
  }
}

TEST_CASE("Herglotz violations") {
  const std::vector<cplx> zs{{0.0, 1.0}, {1.0, 1.0}, {-1.0, 2.0}};
  CHECK(herglotz_violation([](cplx z) { return z; }, zs) == 0.0);
  CHECK(herglotz_violation([](cplx z) { return -1.0 / z; }, zs) == 0.0);
  CHECK(herglotz_violation([](cplx z) { return std::conj(z); }, zs) > 0.0);
}

TEST_CASE("field validation and truncation") {
  const CoefficientMatrixField f = random_sine_field(0);
  CHECK_NOTHROW(f.validate());
  const CoefficientMatrixField t = f.truncated(0.5);
  CHECK(t.right() == doctest::Approx(0.5));
  CoefficientMatrixField bad = *free_field(1.0, 4);
  bad.H[2] = Mat2{1.0, 0.0, 0.0, -1.0};
  CHECK_THROWS(bad.validate());
}
