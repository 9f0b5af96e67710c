#pragma once

// Canonical systems J u' = -z H u on [0, b]: transfer matrices, Weyl-Titchmarsh
// functions, Stieltjes inversion and eigenvalue extraction.

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "edgebulk/field.hpp"
#include "edgebulk/linalg2.hpp"

namespace eb {

struct TransferMatrix {
  CMat2 value;
  double t;
  cplx z;
};

// T(t, z) with T(0, z) = I as an ordered product of exact step exponentials of
// z J Hbar dt, Hbar the trapezoid average of the field over the step.
TransferMatrix transfer_matrix(const CoefficientMatrixField& H, double t, cplx z);
// Real transfer matrix at the right end for real spectral parameter.
Mat2 transfer_matrix_real(const CoefficientMatrixField& H, double lambda);

struct BoundaryData {
  enum class Kind { angle, vector, z_dependent };
  Kind kind = Kind::angle;
  double angle = 0.0;
  Vec2 vec{1.0, 0.0};
  std::function<CVec2(cplx)> eval;

  static BoundaryData from_angle(double phi);
  static BoundaryData from_vector(const Vec2& v);
  static BoundaryData from_evaluator(std::function<CVec2(cplx)> f);

  CVec2 at(cplx z) const;
};

using WeylEvaluator = std::function<cplx(cplx)>;

// m = v1 / v2 with v = T^{-1} w; returns (inf, 0) when v2 = 0.
cplx weyl_m_from_transfer(const CMat2& T, const CVec2& w);

// m(z) = P T(b, z)^{-1} w(z) with b the right end of the field.
WeylEvaluator weyl_m_limit_circle(std::shared_ptr<const CoefficientMatrixField> H, BoundaryData boundary);

struct LimitPointValue {
  cplx value;
  double radius;   // final probe disagreement
  bool certified;  // radius < tol reached within the schedule
  double b_used;
  std::vector<double> disagreements;  // one entry per visited schedule point
};

// Two-probe evaluation of a limit-point m function along the truncation schedule b_n.
LimitPointValue weyl_m_limit_point(const CoefficientMatrixField& H, std::pair<double, double> probe_angles,
                                   const std::vector<double>& schedule, cplx z, double tol = 1e-6);

struct AtomEstimate {
  double mass;
  double imag_residue;
};

// -i eps m(t + i eps) along a decreasing eps schedule with Richardson extrapolation of the last two values.
AtomEstimate stieltjes_atom(const WeylEvaluator& m, double t, const std::vector<double>& eps_schedule);

struct PruferValue {
  double angle;  // continuous argument of u(b, lambda), starting from 0 at u(0) = (1, 0)
  Vec2 u;
};

PruferValue prufer_endpoint(const CoefficientMatrixField& H, double lambda);

// What to do when the Pruefer angle moves by more than pi between two scan points.
enum class JumpPolicy {
  strict,  // throw ResolutionError
  // Bisect the offending interval until the jump is at most pi or the interval
  // is below the root tolerance. Nearly degenerate fields lock the angle on
  // plateaus separated by almost exactly pi, which a uniform refinement never
  // resolves; the count of pi-crossings of the continuous angle stays exact.
  bisect,
};

// Roots of <w(lambda), J u(b, lambda)> in [lo, hi], u(0) = (1, 0).
std::vector<double> eigenvalues(const CoefficientMatrixField& H, const BoundaryData& boundary, double lo, double hi,
                                double resolution, JumpPolicy policy = JumpPolicy::strict);

struct SpectralAtom {
  double location;
  double mass;
};

struct SpectralMeasure {
  std::vector<SpectralAtom> atoms;
  double lo;
  double hi;
};

SpectralMeasure spectral_measure(std::shared_ptr<const CoefficientMatrixField> H, const BoundaryData& boundary,
                                 double lo, double hi, double resolution, const std::vector<double>& eps_schedule,
                                 JumpPolicy policy = JumpPolicy::strict);

double herglotz_violation(const WeylEvaluator& m, const std::vector<cplx>& zs);

}  // namespace eb
