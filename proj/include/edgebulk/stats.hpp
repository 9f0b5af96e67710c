#pragma once

#include <functional>
#include <vector>

namespace eb {

// Linear-interpolation quantile (the common "type 7" definition).
double quantile(std::vector<double> v, double q);
double median(std::vector<double> v);
double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);

// Two-sample Kolmogorov-Smirnov sup distance.
double ks_statistic(std::vector<double> a, std::vector<double> b);
// One-sample distance against a continuous cdf.
double ks_statistic(std::vector<double> a, const std::function<double(double)>& cdf);

// Asymptotic two-sided critical value sqrt(-log(alpha/2)/2) / sqrt(n).
double ks_critical_value(std::size_t n, double alpha);

// Ordinary least-squares slope of y on x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);
// Slope of log y on log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

double gamma_cdf(double x, double shape, double scale);

bool strictly_decreasing(const std::vector<double>& v);

// Hausdorff distance of two finite point sets; infinity when exactly one is empty, 0 when both are.
double hausdorff_distance(const std::vector<double>& a, const std::vector<double>& b);

// Nearest-neighbour gaps of a sorted set restricted to [lo, hi].
std::vector<double> nearest_neighbor_gaps(const std::vector<double>& sorted_points, double lo, double hi);

}  // namespace eb
