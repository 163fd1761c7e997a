#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "regimecast/error.hpp"
#include "regimecast/stats.hpp"

namespace regimecast {

/// Local maxima of a close-price window. Parallel arrays: position,
/// height (close at the peak) and second-order difference there.
struct PeakSet {
  std::vector<std::size_t> indices;
  std::vector<double> heights;
  std::vector<double> curvatures;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
};

/// Second-order difference y(k+1) - 2 y(k) + y(k-1); negative at a peak.
inline double peak_curvature(std::span<const double> closes, std::size_t k) {
  if (k == 0 || k + 1 >= closes.size())
    throw std::out_of_range("curvature undefined at window boundary");
  return closes[k + 1] - 2.0 * closes[k] + closes[k - 1];
}

/// Strict interior local maxima. A plateau of equal values counts once,
/// at its first index, when the plateau sits above both neighbours.
/// Endpoints are never peaks.
inline PeakSet detect_peaks(std::span<const double> closes) {
  PeakSet out;
  const std::size_t n = closes.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    if (closes[i] > closes[i - 1]) {
      std::size_t j = i;
      while (j + 1 < n && closes[j + 1] == closes[i]) ++j;
      if (j + 1 < n && closes[j + 1] < closes[i]) {
        out.indices.push_back(i);
        out.heights.push_back(closes[i]);
        out.curvatures.push_back(peak_curvature(closes, i));
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

/// Least squares of peak heights on peak curvatures. Degenerate inputs
/// stay total: fewer than two peaks or zero curvature variance gives a
/// flat fit through the mean peak height, and a peakless window falls
/// back to the mean close.
inline LineFit fit_peak_line(const PeakSet& peaks, std::span<const double> closes) {
  LineFit fit;
  if (peaks.empty()) {
    fit.intercept = mean(closes);
    return fit;
  }
  const double h_mean = mean(peaks.heights);
  if (peaks.size() < 2) {
    fit.intercept = h_mean;
    return fit;
  }
  const double c_mean = mean(peaks.curvatures);
  double s_cc = 0.0;
  double s_ch = 0.0;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    const double dc = peaks.curvatures[i] - c_mean;
    s_cc += dc * dc;
    s_ch += dc * (peaks.heights[i] - h_mean);
  }
  if (s_cc == 0.0) {
    fit.intercept = h_mean;
    return fit;
  }
  fit.slope = s_ch / s_cc;
  fit.intercept = h_mean - fit.slope * c_mean;
  return fit;
}

/// Tail-mean convention for the estimated percentage change. The default
/// averages the last six closes; the alternative averages seven starting
/// one minute earlier.
enum class EstPcMode {
  last6_div6,  // minutes 54..59 of the window, divided by 6
  last7_div7,  // minutes 53..59 of the window, divided by 7
};

/// mean(tail closes) / mean(all closes) - 1 over a 59-minute window.
inline double estimated_pct_change(std::span<const double> closes,
                                   EstPcMode mode = EstPcMode::last6_div6) {
  if (closes.size() != 59)
    throw domain_error("estimated percentage change expects a 59-minute window");
  for (double c : closes)
    if (!(c > 0.0)) throw domain_error("estimated percentage change needs positive closes");
  const std::size_t tail = mode == EstPcMode::last6_div6 ? 6 : 7;
  const double tail_mean = mean(closes.subspan(closes.size() - tail));
  return tail_mean / mean(closes) - 1.0;
}

}  // namespace regimecast
