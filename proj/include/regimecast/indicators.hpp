#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

#include "regimecast/error.hpp"
#include "regimecast/market_data.hpp"

namespace regimecast {

/// Wilder RSI over closes[0..end] evaluated at `end`: simple average of
/// the first `period` changes, then recursive smoothing over the rest.
inline double rsi_at(std::span<const double> closes, std::size_t end, int period = 14) {
  if (period < 1) throw domain_error("rsi period must be positive");
  if (end >= closes.size()) throw domain_error("rsi index out of range");
  if (end < static_cast<std::size_t>(period))
    throw insufficient_history_error("rsi", "need " + format_int(period) + " price changes, have " +
                                                format_int(std::int64_t(end)));
  double avg_gain = 0.0;
  double avg_loss = 0.0;
  for (std::size_t i = 1; i <= static_cast<std::size_t>(period); ++i) {
    const double d = closes[i] - closes[i - 1];
    if (d > 0.0)
      avg_gain += d;
    else
      avg_loss -= d;
  }
  avg_gain /= period;
  avg_loss /= period;
  for (std::size_t i = period + 1; i <= end; ++i) {
    const double d = closes[i] - closes[i - 1];
    avg_gain = (avg_gain * (period - 1) + std::max(d, 0.0)) / period;
    avg_loss = (avg_loss * (period - 1) + std::max(-d, 0.0)) / period;
  }
  if (avg_gain == 0.0 && avg_loss == 0.0) return 50.0;  // flat history
  if (avg_loss == 0.0) return 100.0;
  return 100.0 - 100.0 / (1.0 + avg_gain / avg_loss);
}

/// Ultimate Oscillator at `end` with buying-pressure / true-range sums over
/// three lookbacks (weights 4/2/1). A zero true-range sum reads as 0.5 so a
/// flat market scores 50.
inline double ultosc_at(std::span<const Candle> candles, std::size_t end, int p1 = 7, int p2 = 14,
                        int p3 = 28) {
  if (!(p1 > 0 && p2 > 0 && p3 > 0 && p1 <= p2 && p2 <= p3))
    throw domain_error("ultosc periods must be positive and ordered");
  if (end >= candles.size()) throw domain_error("ultosc index out of range");
  if (end < static_cast<std::size_t>(p3))
    throw insufficient_history_error("ultosc", "need " + format_int(p3) + " periods, have " +
                                                   format_int(std::int64_t(end)));
  double bp1 = 0.0, tr1 = 0.0, bp2 = 0.0, tr2 = 0.0, bp3 = 0.0, tr3 = 0.0;
  for (std::size_t back = 0; back < static_cast<std::size_t>(p3); ++back) {
    const std::size_t i = end - back;
    const double prev_close = candles[i - 1].close;
    const double lo = std::min(candles[i].low, prev_close);
    const double hi = std::max(candles[i].high, prev_close);
    const double bp = candles[i].close - lo;
    const double tr = hi - lo;
    if (back < static_cast<std::size_t>(p1)) { bp1 += bp; tr1 += tr; }
    if (back < static_cast<std::size_t>(p2)) { bp2 += bp; tr2 += tr; }
    bp3 += bp;
    tr3 += tr;
  }
  const auto ratio = [](double bp, double tr) { return tr == 0.0 ? 0.5 : bp / tr; };
  return 100.0 * (4.0 * ratio(bp1, tr1) + 2.0 * ratio(bp2, tr2) + ratio(bp3, tr3)) / 7.0;
}

/// Simple moving average of the `len` values ending at `end` inclusive.
inline double sma_at(std::span<const double> xs, std::size_t end, int len) {
  if (len < 1) throw domain_error("moving average length must be positive");
  if (end >= xs.size()) throw domain_error("moving average index out of range");
  if (end + 1 < static_cast<std::size_t>(len))
    throw insufficient_history_error("ma_ratio", "need " + format_int(len) + " values, have " +
                                                     format_int(std::int64_t(end + 1)));
  double s = 0.0;
  for (std::size_t i = end + 1 - len; i <= end; ++i) s += xs[i];
  return s / len;
}

/// Z-score of xs[end] against the rolling window of `window` values ending
/// there (population stddev; zero variance reads as 0).
inline double zscore_at(std::span<const double> xs, std::size_t end, int window,
                        const char* indicator) {
  if (window < 1) throw domain_error("zscore window must be positive");
  if (end >= xs.size()) throw domain_error("zscore index out of range");
  if (end + 1 < static_cast<std::size_t>(window))
    throw insufficient_history_error(indicator, "need " + format_int(window) + " values, have " +
                                                    format_int(std::int64_t(end + 1)));
  const auto win = xs.subspan(end + 1 - window, window);
  const double sd = stddev_population(win);
  if (sd == 0.0) return 0.0;
  return (xs[end] - mean(win)) / sd;
}

}  // namespace regimecast
