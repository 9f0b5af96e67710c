#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace eb {

enum class TimeScale { native, log_time };

// Strictly increasing finite node array with at least two nodes.
class TimeGrid {
 public:
  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> nodes, TimeScale scale = TimeScale::native);

  const std::vector<double>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  double operator[](std::size_t k) const { return nodes_[k]; }
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }
  double gap(std::size_t k) const { return nodes_[k + 1] - nodes_[k]; }
  TimeScale scale() const { return scale_; }

  // Index k with nodes[k] <= t <= nodes[k+1]; throws RangeError outside the hull.
  std::size_t interval_of(double t) const;
  // Index of a node equal to t within a relative tolerance, or npos.
  std::size_t find_node(double t, double rel_tol = 1e-12) const;
  // Prefix grid made of nodes[0..=last].
  TimeGrid prefix(std::size_t last) const;

  bool operator==(const TimeGrid& o) const { return scale_ == o.scale_ && nodes_ == o.nodes_; }

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

 private:
  std::vector<double> nodes_;
  TimeScale scale_ = TimeScale::native;
};

struct GridPolicy {
  double max_step = 0.01;
  // Upper bound on fast_rate(t) * gap; infinity disables the cap.
  double phase_cap = std::numeric_limits<double>::infinity();
  std::function<double(double)> fast_rate;
  // Floor on the gap. When positive the cap is relaxed wherever it would force
  // gaps below this value (used for rotations so fast that only their averaged
  // effect is meaningful).
  double min_step = 0.0;
};

TimeGrid make_grid(double t0, double t1, const GridPolicy& policy, TimeScale scale = TimeScale::native);

// Grid through every break point (each break is a node), refined by the policy in between.
TimeGrid make_grid(const std::vector<double>& breaks, const GridPolicy& policy,
                   TimeScale scale = TimeScale::native);

// Every gap split into `factor` equal parts; the original nodes stay nodes, so a
// path sampled on the refinement restricts exactly to the original grid.
TimeGrid refine_grid(const TimeGrid& grid, std::size_t factor);

// upsilon(t) = -log(1 - c t) and its inverse.
double log_time(double t, double c);
double log_time_inverse(double s, double c);

}  // namespace eb
