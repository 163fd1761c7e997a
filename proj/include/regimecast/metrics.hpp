#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "regimecast/error.hpp"
#include "regimecast/labeling.hpp"

namespace regimecast {

/// Exhaustive 3x3 tally, indexed [true class][predicted class].
struct ConfusionCounts {
  std::array<std::array<std::int64_t, 3>, 3> m{};

  std::int64_t at(Decision truth, Decision pred) const {
    return m[static_cast<int>(truth)][static_cast<int>(pred)];
  }
  std::int64_t total() const {
    std::int64_t t = 0;
    for (const auto& row : m)
      for (std::int64_t c : row) t += c;
    return t;
  }
  std::int64_t true_count(Decision truth) const {
    std::int64_t t = 0;
    for (std::int64_t c : m[static_cast<int>(truth)]) t += c;
    return t;
  }

  // the paper-style aliases
  std::int64_t t_b() const { return at(Decision::buy, Decision::buy); }
  std::int64_t t_s() const { return at(Decision::sell, Decision::sell); }
  std::int64_t t_h() const { return at(Decision::hold, Decision::hold); }
  std::int64_t f_bs() const { return at(Decision::buy, Decision::sell); }
  std::int64_t f_bh() const { return at(Decision::buy, Decision::hold); }
  std::int64_t f_sb() const { return at(Decision::sell, Decision::buy); }
  std::int64_t f_sh() const { return at(Decision::sell, Decision::hold); }
  std::int64_t f_hb() const { return at(Decision::hold, Decision::buy); }
  std::int64_t f_hs() const { return at(Decision::hold, Decision::sell); }
};

inline ConfusionCounts confusion(std::span<const Decision> truth, std::span<const Decision> pred) {
  if (truth.size() != pred.size())
    throw domain_error("confusion: series lengths differ (" + format_int(std::int64_t(truth.size())) +
                       " vs " + format_int(std::int64_t(pred.size())) + ")");
  ConfusionCounts out;
  for (std::size_t i = 0; i < truth.size(); ++i)
    out.m[static_cast<int>(truth[i])][static_cast<int>(pred[i])]++;
  return out;
}

/// Per-class accuracies (correct / true instances), their plain average,
/// and the accumulated percentage change. Classes absent from the truth
/// score 0 and are flagged in zero_support.
struct Metrics {
  double acc_b = 0.0;
  double acc_s = 0.0;
  double acc_h = 0.0;
  double mean_acc = 0.0;
  double apc = 0.0;
  std::array<bool, 3> zero_support{false, false, false};
};

inline Metrics per_class_and_mean_accuracy(const ConfusionCounts& counts) {
  Metrics out;
  std::array<double, 3> acc{};
  for (int c = 0; c < 3; ++c) {
    const std::int64_t support = counts.true_count(static_cast<Decision>(c));
    if (support == 0) {
      acc[c] = 0.0;
      out.zero_support[c] = true;
    } else {
      acc[c] = static_cast<double>(counts.m[c][c]) / static_cast<double>(support);
    }
  }
  out.acc_b = acc[static_cast<int>(Decision::buy)];
  out.acc_s = acc[static_cast<int>(Decision::sell)];
  out.acc_h = acc[static_cast<int>(Decision::hold)];
  out.mean_acc = (out.acc_b + out.acc_s + out.acc_h) / 3.0;
  return out;
}

/// Accumulated percentage change over the decision horizon, with the
/// piecewise payoff exactly as defined: a sell pays w(t) - w(t+1), a buy
/// w(t) + w(t+1), anything else w(t); summed for t = 1..T-1.
inline double apc(std::span<const double> returns, std::span<const Decision> decisions) {
  if (returns.size() != decisions.size())
    throw domain_error("apc: returns and decisions lengths differ");
  if (returns.size() < 2)
    throw domain_error("apc needs at least 2 periods");
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < returns.size(); ++t) {
    switch (decisions[t]) {
      case Decision::sell: total += returns[t] - returns[t + 1]; break;
      case Decision::buy: total += returns[t] + returns[t + 1]; break;
      case Decision::hold: total += returns[t]; break;
    }
  }
  return total;
}

/// Convenience scoring of one prediction series.
inline Metrics score(std::span<const Decision> truth, std::span<const Decision> pred,
                     std::span<const double> returns) {
  Metrics out = per_class_and_mean_accuracy(confusion(truth, pred));
  out.apc = apc(returns, pred);
  return out;
}

}  // namespace regimecast
