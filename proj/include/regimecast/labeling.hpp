#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "regimecast/error.hpp"
#include "regimecast/io.hpp"
#include "regimecast/market_data.hpp"
#include "regimecast/stats.hpp"
#include "regimecast/version.hpp"

namespace regimecast {

enum class Decision : int { buy = 0, sell = 1, hold = 2 };

inline constexpr std::array<Decision, 3> kAllDecisions{Decision::buy, Decision::sell,
                                                       Decision::hold};

inline std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::buy: return "Buy";
    case Decision::sell: return "Sell";
    case Decision::hold: return "Hold";
  }
  return "Hold";
}

inline Decision decision_from_string(std::string_view s) {
  if (s == "Buy") return Decision::buy;
  if (s == "Sell") return Decision::sell;
  if (s == "Hold") return Decision::hold;
  throw parse_error("unknown decision '" + std::string(s) + "'");
}

/// Symmetric labeling cutoffs: lower is the empirical q-quantile of the
/// returns (clamped to be non-positive), upper its absolute value.
struct ThresholdPair {
  double lower = 0.0;
  double upper = 0.0;
  double quantile_q = 0.0;
  bool clamped = false;  // set when the raw quantile came out positive
};

/// Buy/Sell/Hold labels aligned one-to-one with a ReturnSeries.
struct DecisionSeries {
  std::string market_id;
  std::vector<std::int64_t> timestamps;
  std::vector<Decision> decisions;

  std::size_t size() const { return decisions.size(); }
};

inline ThresholdPair compute_thresholds(const ReturnSeries& returns, double q = 0.04) {
  if (returns.size() == 0) throw insufficient_data_error("cannot compute thresholds on empty returns");
  if (!(q > 0.0 && q < 0.5)) throw domain_error("quantile fraction must lie in (0, 0.5)");
  ThresholdPair out;
  out.quantile_q = q;
  out.lower = quantile(returns.values, q);
  if (out.lower > 0.0) {
    out.lower = 0.0;
    out.clamped = true;
  }
  out.upper = std::fabs(out.lower);
  return out;
}

/// Below the lower threshold sells, above the upper buys, everything else
/// (including exact equality with either cutoff) holds.
inline DecisionSeries label_series(const ReturnSeries& returns, const ThresholdPair& thresholds) {
  if (!(thresholds.upper == std::fabs(thresholds.lower)) || thresholds.lower > 0.0)
    throw domain_error("invalid threshold pair");
  DecisionSeries out;
  out.market_id = returns.market_id;
  out.timestamps = returns.timestamps;
  out.decisions.reserve(returns.size());
  for (double w : returns.values) {
    if (w < thresholds.lower)
      out.decisions.push_back(Decision::sell);
    else if (w > thresholds.upper)
      out.decisions.push_back(Decision::buy);
    else
      out.decisions.push_back(Decision::hold);
  }
  return out;
}

inline constexpr const char* kDecisionsHeader = "timestamp,decision";

inline void write_decisions_csv(const DecisionSeries& series, const std::filesystem::path& path,
                                const FileMeta* meta = nullptr) {
  AtomicFile file(path);
  auto& os = file.stream();
  if (meta) write_meta(os, *meta);
  os << kDecisionsHeader << "\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    os << format_int(series.timestamps[i]) << ',' << to_string(series.decisions[i]) << "\n";
  file.commit();
}

inline DecisionSeries read_decisions_csv(const std::filesystem::path& path, std::string market_id,
                                         std::string_view expected_hash = {}) {
  const TextFile file = read_text_file(path);
  check_meta(file.meta, kDecisionsSchema, expected_hash, path);
  if (file.lines.empty() || file.lines.front() != kDecisionsHeader)
    throw parse_error(path.string() + ": expected header '" + kDecisionsHeader + "'");
  DecisionSeries out;
  out.market_id = std::move(market_id);
  for (std::size_t i = 1; i < file.lines.size(); ++i) {
    const auto fields = split(file.lines[i], ',');
    if (fields.size() != 2) throw parse_error(path.string() + ": bad decisions row");
    out.timestamps.push_back(parse_int(fields[0], path.string()));
    out.decisions.push_back(decision_from_string(fields[1]));
  }
  return out;
}

}  // namespace regimecast
