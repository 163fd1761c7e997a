#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "regimecast/error.hpp"
#include "regimecast/indicators.hpp"
#include "regimecast/io.hpp"
#include "regimecast/labeling.hpp"
#include "regimecast/peaks.hpp"
#include "regimecast/version.hpp"
#include "regimecast/window.hpp"

namespace regimecast {

enum class FeatureFamily { proposed, common };

inline std::string_view to_string(FeatureFamily f) {
  return f == FeatureFamily::proposed ? "proposed" : "common";
}

inline FeatureFamily family_from_string(std::string_view s) {
  if (s == "proposed") return FeatureFamily::proposed;
  if (s == "common") return FeatureFamily::common;
  throw parse_error("unknown feature family '" + std::string(s) + "'");
}

/// Indicator settings. The defaults are the standard parameterisations;
/// all are configurable so golden values stay pinned.
struct FeatureParams {
  EstPcMode estpc = EstPcMode::last6_div6;
  int rsi_period = 14;
  int ultosc_p1 = 7;
  int ultosc_p2 = 14;
  int ultosc_p3 = 28;
  int ma_short = 7;
  int ma_long = 25;
  int zscore_window = 59;
};

/// The eight peak-curvature window features.
struct ProposedFeatures {
  double buy_prop = 0.0;
  double sell_prop = 0.0;
  double close_price = 0.0;
  double lm_intercept = 0.0;
  double lm_slope = 0.0;
  double peaks_avg_curvature = 0.0;
  double peaks_avg_magnitude = 0.0;
  double est_pct_change = 0.0;

  std::vector<double> to_vector() const {
    return {buy_prop,     sell_prop, close_price,          lm_intercept,
            lm_slope,     peaks_avg_curvature, peaks_avg_magnitude, est_pct_change};
  }
};

/// The six conventional indicator features.
struct CommonFeatures {
  double rsi = 0.0;
  double ultosc = 0.0;
  double close_pct_change = 0.0;
  double close_zscore = 0.0;
  double volume_zscore = 0.0;
  double ma_ratio = 0.0;

  std::vector<double> to_vector() const {
    return {rsi, ultosc, close_pct_change, close_zscore, volume_zscore, ma_ratio};
  }
};

inline const std::vector<std::string>& feature_names(FeatureFamily family) {
  static const std::vector<std::string> proposed{
      "buy_prop",  "sell_prop",           "close_price",         "lm_intercept",
      "lm_slope",  "peaks_avg_curvature", "peaks_avg_magnitude", "est_pct_change"};
  static const std::vector<std::string> common{"rsi",          "ultosc",        "close_pct_change",
                                               "close_zscore", "volume_zscore", "ma_ratio"};
  return family == FeatureFamily::proposed ? proposed : common;
}

inline ProposedFeatures proposed_features(const WindowBlock& block,
                                          const FeatureParams& params = {}) {
  if (block.closes.size() != kWindowMinutes || block.decisions.size() != kWindowMinutes)
    throw domain_error("window block must carry 59 minutes");
  ProposedFeatures out;
  std::size_t buys = 0;
  std::size_t sells = 0;
  for (Decision d : block.decisions) {
    if (d == Decision::buy) ++buys;
    if (d == Decision::sell) ++sells;
  }
  out.buy_prop = static_cast<double>(buys) / static_cast<double>(kWindowMinutes);
  out.sell_prop = static_cast<double>(sells) / static_cast<double>(kWindowMinutes);
  out.close_price = block.closes.back();

  const PeakSet peaks = detect_peaks(block.closes);
  const LineFit fit = fit_peak_line(peaks, block.closes);
  out.lm_intercept = fit.intercept;
  out.lm_slope = fit.slope;
  // peakless windows: curvature reads flat, magnitude falls back to the
  // window mean close (keeps the +delta shift law intact)
  out.peaks_avg_curvature = peaks.empty() ? 0.0 : mean(peaks.curvatures);
  out.peaks_avg_magnitude = peaks.empty() ? mean(block.closes) : mean(peaks.heights);
  out.est_pct_change = estimated_pct_change(block.closes, params.estpc);
  return out;
}

/// Indicator values as of the block's minute 59, computed causally over the
/// full candle history up to that minute.
inline CommonFeatures common_features(const WindowBlock& block, const CandleSeries& history,
                                      const FeatureParams& params = {}) {
  if (block.closes.size() != kWindowMinutes)
    throw domain_error("window block must carry 59 minutes");
  const std::size_t at = block.start + kWindowMinutes - 1;  // global index of minute 59
  if (at >= history.size())
    throw domain_error("candle history does not cover the block");

  std::vector<double> closes(at + 1);
  std::vector<double> volumes(at + 1);
  for (std::size_t i = 0; i <= at; ++i) {
    closes[i] = history.candles[i].close;
    volumes[i] = history.candles[i].volume;
  }

  CommonFeatures out;
  out.rsi = rsi_at(closes, at, params.rsi_period);
  out.ultosc = ultosc_at(history.candles, at, params.ultosc_p1, params.ultosc_p2, params.ultosc_p3);
  out.close_pct_change = block.closes.back() / block.closes.front() - 1.0;
  out.close_zscore = zscore_at(closes, at, params.zscore_window, "close_zscore");
  out.volume_zscore = zscore_at(volumes, at, params.zscore_window, "volume_zscore");
  out.ma_ratio = sma_at(closes, at, params.ma_short) / sma_at(closes, at, params.ma_long);
  return out;
}

/// One labeled hour: the feature vector for minutes 1..59 and the move
/// into minute 60 as the prediction target.
struct HourlyObservation {
  int block_index = 0;
  std::vector<double> features;
  Decision target_decision = Decision::hold;
  double target_return = 0.0;
};

struct Dataset {
  std::string market_id;
  FeatureFamily family = FeatureFamily::proposed;
  std::vector<HourlyObservation> observations;

  std::size_t size() const { return observations.size(); }
  std::size_t dimension() const { return feature_names(family).size(); }
};

inline Dataset build_dataset(const CandleSeries& series, const DecisionSeries& decisions,
                             FeatureFamily family, const FeatureParams& params = {}) {
  Dataset out;
  out.market_id = series.market_id;
  out.family = family;
  const std::vector<WindowBlock> blocks = make_blocks(series, decisions);
  out.observations.reserve(blocks.size());
  for (const WindowBlock& block : blocks) {
    HourlyObservation obs;
    obs.block_index = block.block_index;
    obs.features = family == FeatureFamily::proposed
                       ? proposed_features(block, params).to_vector()
                       : common_features(block, series, params).to_vector();
    for (double v : obs.features)
      if (!std::isfinite(v))
        throw domain_error("non-finite feature in block " + format_int(block.block_index));
    obs.target_decision = block.target_decision;
    obs.target_return = block.target_return;
    out.observations.push_back(std::move(obs));
  }
  return out;
}

inline void write_features_csv(const Dataset& data, const std::filesystem::path& path,
                               const FileMeta* meta = nullptr) {
  AtomicFile file(path);
  auto& os = file.stream();
  if (meta) write_meta(os, *meta);
  const auto& names = feature_names(data.family);
  for (const auto& n : names) os << n << ',';
  os << "target_decision,target_return,block_index\n";
  for (const HourlyObservation& obs : data.observations) {
    for (double v : obs.features) os << format_double(v) << ',';
    os << to_string(obs.target_decision) << ',' << format_double(obs.target_return) << ','
       << format_int(obs.block_index) << "\n";
  }
  file.commit();
}

inline Dataset read_features_csv(const std::filesystem::path& path, std::string market_id,
                                 FeatureFamily family, std::string_view expected_hash = {}) {
  const TextFile file = read_text_file(path);
  check_meta(file.meta, kFeaturesSchema, expected_hash, path);
  const auto& names = feature_names(family);
  std::string header;
  for (const auto& n : names) header += n + ",";
  header += "target_decision,target_return,block_index";
  if (file.lines.empty() || file.lines.front() != header)
    throw version_error(path.string() + ": feature columns do not match family '" +
                        std::string(to_string(family)) + "'");
  Dataset out;
  out.market_id = std::move(market_id);
  out.family = family;
  const std::size_t d = names.size();
  for (std::size_t i = 1; i < file.lines.size(); ++i) {
    const auto fields = split(file.lines[i], ',');
    if (fields.size() != d + 3) throw parse_error(path.string() + ": bad feature row");
    HourlyObservation obs;
    obs.features.reserve(d);
    for (std::size_t j = 0; j < d; ++j)
      obs.features.push_back(parse_double(fields[j], path.string()));
    obs.target_decision = decision_from_string(fields[d]);
    obs.target_return = parse_double(fields[d + 1], path.string());
    obs.block_index = static_cast<int>(parse_int(fields[d + 2], path.string()));
    out.observations.push_back(std::move(obs));
  }
  return out;
}

}  // namespace regimecast
