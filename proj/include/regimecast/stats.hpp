#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "regimecast/error.hpp"

namespace regimecast {

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw insufficient_data_error("mean of empty range");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

/// Population (1/n) variance.
inline double variance_population(std::span<const double> xs) {
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size());
}

inline double stddev_population(std::span<const double> xs) {
  return std::sqrt(variance_population(xs));
}

/// Linear-interpolation quantile on pre-sorted data: index h = (n-1)q,
/// interpolate between the floor/ceil order statistics.
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw insufficient_data_error("quantile of empty range");
  if (!(q >= 0.0 && q <= 1.0)) throw domain_error("quantile fraction outside [0, 1]");
  const std::size_t n = sorted.size();
  const double h = static_cast<double>(n - 1) * q;
  const std::size_t lo = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0 || lo + 1 >= n) return sorted[lo];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double quantile(std::span<const double> xs, double q) {
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, q);
}

}  // namespace regimecast
