#include "edgebulk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "edgebulk/errors.hpp"

namespace eb {

// ---- CoefficientMatrixField ----

void CoefficientMatrixField::validate() const {
  if (t.size() < 2 || H.size() != t.size() || dt.size() + 1 != t.size()) {
    throw DomainError("coefficient field: inconsistent sizes");
  }
  bool nonzero = false;
  for (std::size_t k = 0; k < H.size(); ++k) {
    const Mat2& m = H[k];
    const double tr = m.trace();
    if (!std::isfinite(tr)) throw DomainError("coefficient field: non-finite entry");
    if (std::abs(m.b - m.c) > 1e-12 * std::max(1.0, std::abs(tr)))
      throw DomainError("coefficient field: not symmetric");
    if (sym_eigenvalues(m)[0] < -1e-10 * std::abs(tr))
      throw DomainError("coefficient field: not positive semidefinite");
    nonzero = nonzero || tr > 0;
  }
  for (double h : dt) {
    if (!(h > 0)) throw DomainError("coefficient field: non-positive gap");
  }
  if (!nonzero) throw DomainError("coefficient field vanishes identically");
}

Mat2 CoefficientMatrixField::at(double s) const {
  if (s < t.front() || s > t.back()) throw RangeError("coefficient field evaluated outside its interval");
  auto it = std::upper_bound(t.begin(), t.end(), s);
  std::size_t k = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
  if (k + 1 >= t.size()) return H.back();
  const double w = (s - t[k]) / dt[k];
  return H[k] * (1.0 - w) + H[k + 1] * w;
}

CoefficientMatrixField CoefficientMatrixField::truncated(double t_max) const {
  if (t_max <= t.front() || t_max > t.back()) throw RangeError("field truncation point outside the interval");
  CoefficientMatrixField out;
  out.closed_right = true;
  for (std::size_t k = 0; k < t.size() && t[k] < t_max; ++k) {
    out.t.push_back(t[k]);
    out.H.push_back(H[k]);
    if (k > 0) out.dt.push_back(dt[k - 1]);
  }
  const std::size_t last = out.t.size() - 1;
  const double gap_to_end = t_max - out.t.back();
  if (gap_to_end > 0) {
    // Keep the stored gap when t_max is the next node, otherwise use the difference.
    const bool is_node = last + 1 < t.size() && t[last + 1] == t_max;
    out.dt.push_back(is_node ? dt[last] : gap_to_end);
    out.t.push_back(t_max);
    out.H.push_back(is_node ? H[last + 1] : at(t_max));
  }
  return out;
}

CoefficientMatrixField field_from_log_clock(const std::vector<double>& s, double c, std::vector<Mat2> H) {
  CoefficientMatrixField f;
  f.t.resize(s.size());
  f.dt.resize(s.size() - 1);
  for (std::size_t k = 0; k < s.size(); ++k) f.t[k] = -std::expm1(-s[k]) / c;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) f.dt[k] = std::exp(-s[k]) * (-std::expm1(-(s[k + 1] - s[k]))) / c;
  f.H = std::move(H);
  return f;
}

// ---- transfer matrices ----

namespace {

inline Mat2 step_average(const CoefficientMatrixField& H, std::size_t k) { return (H.H[k] + H.H[k + 1]) * 0.5; }

}  // namespace

TransferMatrix transfer_matrix(const CoefficientMatrixField& H, double t, cplx z) {
  if (t < H.t.front() || t > H.t.back()) throw RangeError("transfer_matrix: t outside the field interval");
  CMat2 T = CMat2::identity();
  for (std::size_t k = 0; k + 1 < H.t.size() && H.t[k] < t; ++k) {
    Mat2 Hbar;
    double h;
    if (H.t[k + 1] <= t) {
      Hbar = step_average(H, k);
      h = H.dt[k];
    } else {
      h = t - H.t[k];
      Hbar = (H.H[k] + H.at(t)) * 0.5;
    }
    T = expm_traceless(canonical_generator(Hbar, z * h)) * T;
  }
  return {T, t, z};
}

Mat2 transfer_matrix_real(const CoefficientMatrixField& H, double lambda) {
  Mat2 T = Mat2::identity();
  for (std::size_t k = 0; k + 1 < H.t.size(); ++k) {
    T = expm_traceless(canonical_generator(step_average(H, k), lambda * H.dt[k])) * T;
  }
  return T;
}

// ---- boundary data ----

BoundaryData BoundaryData::from_angle(double phi) {
  BoundaryData b;
  b.kind = Kind::angle;
  b.angle = phi;
  b.vec = {std::cos(phi), std::sin(phi)};
  return b;
}

BoundaryData BoundaryData::from_vector(const Vec2& v) {
  if (!(std::hypot(v[0], v[1]) > 0)) throw DomainError("boundary vector must be nonzero");
  BoundaryData b;
  b.kind = Kind::vector;
  b.vec = v;
  b.angle = std::atan2(v[1], v[0]);
  return b;
}

BoundaryData BoundaryData::from_evaluator(std::function<CVec2(cplx)> f) {
  BoundaryData b;
  b.kind = Kind::z_dependent;
  b.eval = std::move(f);
  return b;
}

CVec2 BoundaryData::at(cplx z) const {
  if (kind == Kind::z_dependent) return eval(z);
  return {vec[0], vec[1]};
}

// ---- Weyl functions ----

cplx weyl_m_from_transfer(const CMat2& T, const CVec2& w) {
  const cplx num = T.d * w[0] - T.b * w[1];
  const cplx den = -T.c * w[0] + T.a * w[1];
  if (den == cplx(0.0)) return {std::numeric_limits<double>::infinity(), 0.0};
  return num / den;
}

WeylEvaluator weyl_m_limit_circle(std::shared_ptr<const CoefficientMatrixField> H, BoundaryData boundary) {
  return [H = std::move(H), boundary = std::move(boundary)](cplx z) {
    const TransferMatrix T = transfer_matrix(*H, H->t.back(), z);
    return weyl_m_from_transfer(T.value, boundary.at(z));
  };
}

LimitPointValue weyl_m_limit_point(const CoefficientMatrixField& H, std::pair<double, double> probe_angles,
                                   const std::vector<double>& schedule, cplx z, double tol) {
  if (schedule.empty()) throw DomainError("weyl_m_limit_point: empty truncation schedule");
  const CVec2 e1{std::cos(probe_angles.first), std::sin(probe_angles.first)};
  const CVec2 e2{std::cos(probe_angles.second), std::sin(probe_angles.second)};
  LimitPointValue out{cplx(0.0), std::numeric_limits<double>::infinity(), false, H.t.front(), {}};
  CMat2 T = CMat2::identity();
  std::size_t next = 0;
  auto visit = [&](double b) {
    const cplx m1 = weyl_m_from_transfer(T, e1);
    const cplx m2 = weyl_m_from_transfer(T, e2);
    const double dis = std::abs(m1 - m2);
    out.disagreements.push_back(dis);
    if (std::isfinite(dis) && dis <= out.radius) {
      out.value = 0.5 * (m1 + m2);
      out.radius = dis;
      out.b_used = b;
    }
    return dis < tol;
  };
  for (std::size_t k = 0; k + 1 < H.t.size() && next < schedule.size(); ++k) {
    T = expm_traceless(canonical_generator(step_average(H, k), z * H.dt[k])) * T;
    while (next < schedule.size() && schedule[next] <= H.t[k + 1]) {
      ++next;
      if (visit(H.t[k + 1])) {
        out.certified = true;
        return out;
      }
    }
  }
  return out;
}

AtomEstimate stieltjes_atom(const WeylEvaluator& m, double t, const std::vector<double>& eps) {
  if (eps.size() < 2) throw DomainError("stieltjes_atom: schedule needs at least two entries");
  std::vector<cplx> v(eps.size());
  for (std::size_t k = 0; k < eps.size(); ++k) v[k] = cplx(0.0, -eps[k]) * m(cplx(t, eps[k]));
  const std::size_t n = eps.size();
  const double e1 = eps[n - 2], e2 = eps[n - 1];
  // Linear extrapolation in eps to eps = 0.
  const cplx extrap = (e1 * v[n - 1] - e2 * v[n - 2]) / (e1 - e2);
  return {std::max(0.0, extrap.real()), extrap.imag()};
}

double herglotz_violation(const WeylEvaluator& m, const std::vector<cplx>& zs) {
  double worst = 0.0;
  for (const cplx& z : zs) {
    if (!(z.imag() > 0)) throw DomainError("herglotz_violation: grid point not in the upper half-plane");
    worst = std::max(worst, -m(z).imag());
  }
  return worst;
}

// ---- eigenvalues ----

PruferValue prufer_endpoint(const CoefficientMatrixField& H, double lambda) {
  Vec2 u{1.0, 0.0};
  double angle = 0.0;
  for (std::size_t k = 0; k + 1 < H.t.size(); ++k) {
    const Mat2 Hbar = step_average(H, k);
    const Mat2 M = expm_traceless(canonical_generator(Hbar, lambda * H.dt[k]));
    // With S = Hbar^{1/2}, S u rotates at the constant rate lambda sqrt(det Hbar).
    // Each half turn of S u adds exactly pi to the argument of u; the remainder
    // lies in [0, pi) in the direction of sign(lambda) and is read off by atan2.
    const double sgn = lambda < 0 ? -1.0 : 1.0;
    const double det = Hbar.det();
    const double half_turns =
        det > 0 ? std::floor(std::abs(lambda) * std::sqrt(det) * H.dt[k] / std::numbers::pi) : 0.0;
    const Vec2 v = M * u;
    const double r = std::atan2(u[0] * v[1] - u[1] * v[0], u[0] * v[0] + u[1] * v[1]);
    double rest = sgn * r - half_turns * std::numbers::pi;
    rest -= 2.0 * std::numbers::pi * std::floor((rest + 0.5 * std::numbers::pi) / (2.0 * std::numbers::pi));
    angle += sgn * (half_turns * std::numbers::pi + rest);
    const double nrm = std::hypot(v[0], v[1]);
    u = {v[0] / nrm, v[1] / nrm};
  }
  return {angle, u};
}

namespace {

double boundary_angle(const BoundaryData& b, double lambda) {
  if (b.kind != BoundaryData::Kind::z_dependent) return b.angle;
  const CVec2 w = b.at(cplx(lambda, 0.0));
  return std::atan2(w[1].real(), w[0].real());
}

// Representative of `raw` modulo pi closest to `ref`.
double unwrap_mod_pi(double raw, double ref) {
  return raw + std::numbers::pi * std::round((ref - raw) / std::numbers::pi);
}

}  // namespace

std::vector<double> eigenvalues(const CoefficientMatrixField& H, const BoundaryData& boundary, double lo, double hi,
                                double resolution, JumpPolicy policy) {
  if (!(hi > lo) || !(resolution > 0)) throw DomainError("eigenvalues: invalid window or resolution");
  const std::size_t n0 = static_cast<std::size_t>(std::ceil((hi - lo) / resolution));
  const double step = (hi - lo) / static_cast<double>(n0);
  struct ScanPoint {
    double lam, g, psi;
  };
  auto evaluate = [&](double l, const ScanPoint* prev) {
    const double raw = boundary_angle(boundary, l);
    const double p = prev ? unwrap_mod_pi(raw, prev->psi) : raw;
    return ScanPoint{l, prufer_endpoint(H, l).angle - p, p};
  };
  std::vector<ScanPoint> pts;
  for (std::size_t i = 0; i <= n0; ++i) {
    const double l = i == n0 ? hi : lo + step * static_cast<double>(i);
    pts.push_back(evaluate(l, pts.empty() ? nullptr : &pts.back()));
  }
  if (policy == JumpPolicy::bisect) {
    std::vector<ScanPoint> refined{pts.front()};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      // Depth-first bisection of one scan interval; points leave the stack left to right.
      std::vector<ScanPoint> stack{pts[i + 1]};
      while (!stack.empty()) {
        const ScanPoint& left = refined.back();
        const ScanPoint right = stack.back();
        const double width = right.lam - left.lam;
        if (std::abs(right.g - left.g) > std::numbers::pi && width > 1e-10 * std::max(1.0, std::abs(left.lam))) {
          stack.push_back(evaluate(0.5 * (left.lam + right.lam), &left));
          continue;
        }
        stack.pop_back();
        refined.push_back(right);
      }
    }
    pts = std::move(refined);
  }
  std::vector<double> lam(pts.size()), g(pts.size()), psi(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) lam[i] = pts[i].lam, g[i] = pts[i].g, psi[i] = pts[i].psi;
  const std::size_t n = lam.size() - 1;
  const double pi = std::numbers::pi;
  std::vector<double> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (policy == JumpPolicy::strict && std::abs(g[i + 1] - g[i]) > pi) {
      throw ResolutionError("eigenvalues: Pruefer angle jumps by more than pi near lambda=" + std::to_string(lam[i]));
    }
    const double glo = std::min(g[i], g[i + 1]), ghi = std::max(g[i], g[i + 1]);
    for (double m = std::floor(glo / pi) + 1; m * pi <= ghi; m += 1) {
      const double target = m * pi;
      auto f = [&](double x) {
        const double ref = psi[i] + (psi[i + 1] - psi[i]) * (x - lam[i]) / (lam[i + 1] - lam[i]);
        return prufer_endpoint(H, x).angle - unwrap_mod_pi(boundary_angle(boundary, x), ref) - target;
      };
      double a = lam[i], b = lam[i + 1];
      double fa = g[i] - target, fb = g[i + 1] - target;
      if (fb == 0) {
        roots.push_back(b);
        continue;
      }
      // Illinois-modified regula falsi with a bisection safeguard.
      int side = 0;
      for (int it = 0; it < 200 && std::abs(b - a) > 1e-10 * std::max(1.0, std::abs(a)); ++it) {
        double x = (a * fb - b * fa) / (fb - fa);
        if (!(x > std::min(a, b) && x < std::max(a, b)) || it % 8 == 7) x = 0.5 * (a + b);
        const double fx = f(x);
        if (fx == 0) {
          a = b = x;
          break;
        }
        if ((fx > 0) == (fb > 0)) {
          b = x;
          fb = fx;
          if (side == -1) fa *= 0.5;
          side = -1;
        } else {
          a = x;
          fa = fx;
          if (side == 1) fb *= 0.5;
          side = 1;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

SpectralMeasure spectral_measure(std::shared_ptr<const CoefficientMatrixField> H, const BoundaryData& boundary,
                                 double lo, double hi, double resolution, const std::vector<double>& eps_schedule,
                                 JumpPolicy policy) {
  SpectralMeasure out{{}, lo, hi};
  const auto roots = eigenvalues(*H, boundary, lo, hi, resolution, policy);
  const WeylEvaluator m = weyl_m_limit_circle(H, boundary);
  for (double r : roots) {
    const AtomEstimate a = stieltjes_atom(m, r, eps_schedule);
    if (a.mass > 0) out.atoms.push_back({r, a.mass});
  }
  return out;
}

}  // namespace eb
