#include "edgebulk/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edgebulk/errors.hpp"

namespace eb {

TimeGrid::TimeGrid(std::vector<double> nodes, TimeScale scale) : nodes_(std::move(nodes)), scale_(scale) {
  if (nodes_.size() < 2) throw DomainError("time grid needs at least two nodes");
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (!std::isfinite(nodes_[k])) throw DomainError("time grid node is not finite");
    if (k > 0 && !(nodes_[k] > nodes_[k - 1])) {
      throw DomainError("time grid nodes must be strictly increasing (node " + std::to_string(k) + ")");
    }
  }
}

std::size_t TimeGrid::interval_of(double t) const {
  if (t < nodes_.front() || t > nodes_.back()) {
    throw RangeError("time " + std::to_string(t) + " outside grid [" + std::to_string(nodes_.front()) + ", " +
                     std::to_string(nodes_.back()) + "]");
  }
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  std::size_t k = static_cast<std::size_t>(it - nodes_.begin());
  if (k == 0) return 0;
  return std::min(k - 1, nodes_.size() - 2);
}

std::size_t TimeGrid::find_node(double t, double rel_tol) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
  const double tol = rel_tol * std::max(1.0, std::abs(t));
  for (auto cand : {it, it == nodes_.begin() ? it : it - 1}) {
    if (cand != nodes_.end() && std::abs(*cand - t) <= tol) return static_cast<std::size_t>(cand - nodes_.begin());
  }
  return npos;
}

TimeGrid TimeGrid::prefix(std::size_t last) const {
  if (last >= nodes_.size()) throw RangeError("grid prefix beyond last node");
  return TimeGrid(std::vector<double>(nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(last) + 1),
                  scale_);
}

namespace {

void append_segment(std::vector<double>& out, double t0, double t1, const GridPolicy& policy) {
  if (!(policy.max_step > 0) || !(policy.phase_cap > 0)) throw DomainError("grid policy steps must be positive");
  const bool capped = policy.fast_rate && std::isfinite(policy.phase_cap);
  double t = t0;
  while (true) {
    double h = policy.max_step;
    if (capped) {
      const double r0 = std::abs(policy.fast_rate(t));
      if (r0 * h > policy.phase_cap) h = policy.phase_cap / r0;
      // Rates that grow within the step are bounded using the right end as well.
      const double r1 = std::abs(policy.fast_rate(std::min(t + h, t1)));
      if (r1 * h > policy.phase_cap) h = policy.phase_cap / r1;
    }
    h = std::max(h, policy.min_step);
    if (!(h > 0) || !std::isfinite(h)) throw DomainError("grid policy produced a non-positive step");
    const double next = t + h;
    if (next >= t1 || t1 - next <= 1e-9 * h) {
      out.push_back(t1);
      return;
    }
    out.push_back(next);
    t = next;
  }
}

}  // namespace

TimeGrid make_grid(double t0, double t1, const GridPolicy& policy, TimeScale scale) {
  return make_grid(std::vector<double>{t0, t1}, policy, scale);
}

TimeGrid refine_grid(const TimeGrid& grid, std::size_t factor) {
  if (factor < 1) throw DomainError("refine_grid: factor must be at least 1");
  std::vector<double> nodes;
  nodes.reserve((grid.size() - 1) * factor + 1);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    nodes.push_back(grid[k]);
    for (std::size_t j = 1; j < factor; ++j) {
      nodes.push_back(grid[k] + grid.gap(k) * static_cast<double>(j) / static_cast<double>(factor));
    }
  }
  nodes.push_back(grid.back());
  return TimeGrid(std::move(nodes), grid.scale());
}

TimeGrid make_grid(const std::vector<double>& breaks, const GridPolicy& policy, TimeScale scale) {
  if (breaks.size() < 2) throw DomainError("grid needs at least two break points");
  for (double b : breaks) {
    if (!std::isfinite(b)) throw DomainError("grid break point is not finite");
  }
  std::vector<double> nodes{breaks.front()};
  for (std::size_t j = 1; j < breaks.size(); ++j) {
    if (!(breaks[j] > breaks[j - 1])) throw DomainError("grid break points must be strictly increasing");
    append_segment(nodes, breaks[j - 1], breaks[j], policy);
  }
  return TimeGrid(std::move(nodes), scale);
}

double log_time(double t, double c) {
  if (!(c > 0) || c > 1) throw DomainError("log_time: c must lie in (0, 1]");
  if (t < 0 || c * t >= 1) throw DomainError("log_time: requires 0 <= c t < 1");
  return -std::log1p(-c * t);
}

double log_time_inverse(double s, double c) {
  if (!(c > 0) || c > 1) throw DomainError("log_time_inverse: c must lie in (0, 1]");
  if (s < 0 || !std::isfinite(s)) throw DomainError("log_time_inverse: requires finite s >= 0");
  return -std::expm1(-s) / c;
}

}  // namespace eb
