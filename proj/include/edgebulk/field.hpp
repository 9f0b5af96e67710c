#pragma once

#include <vector>

#include "edgebulk/linalg2.hpp"

namespace eb {

// Sampled 2x2 symmetric positive semidefinite coefficient matrix H(t) on
// [t.front(), t.back()]. Gaps are stored separately so that fields built from a
// logarithmic clock keep full relative precision close to a singular endpoint.
struct CoefficientMatrixField {
  std::vector<double> t;
  std::vector<double> dt;
  std::vector<Mat2> H;
  // True when the right endpoint is a regular (closed) end of the system.
  bool closed_right = false;

  std::size_t size() const { return t.size(); }
  double left() const { return t.front(); }
  double right() const { return t.back(); }

  // Checks sizes, symmetry and positivity (min eigenvalue >= -1e-10 trace); throws on failure.
  void validate() const;
  // Linear interpolation between nodes.
  Mat2 at(double s) const;
  // Field restricted to nodes with t <= t_max, ending exactly at t_max.
  CoefficientMatrixField truncated(double t_max) const;
};

// Field on native time t = (1 - exp(-s)) / c from samples on the logarithmic clock s.
CoefficientMatrixField field_from_log_clock(const std::vector<double>& s, double c, std::vector<Mat2> H);

}  // namespace eb
