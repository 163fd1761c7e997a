#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "regimecast/error.hpp"
#include "regimecast/labeling.hpp"
#include "regimecast/market_data.hpp"

namespace regimecast {

inline constexpr std::size_t kBlockMinutes = 60;   // one prediction block
inline constexpr std::size_t kWindowMinutes = 59;  // feature minutes per block

/// One hourly prediction block. The first 59 minutes feed the features;
/// the pair (target_decision, target_return) is the labeled move into the
/// 60th minute. In-window decision slot j holds the label of the return
/// entering minute j+1, so no slot depends on data past minute 59.
struct WindowBlock {
  std::string market_id;
  int block_index = 0;
  std::size_t start = 0;  // global candle index of the block's first minute
  std::vector<double> closes;
  std::vector<double> volumes;
  std::vector<Decision> decisions;
  Decision target_decision = Decision::hold;
  double target_return = 0.0;
};

/// Slices a market into floor(n/60) consecutive non-overlapping blocks;
/// the trailing remainder is dropped.
inline std::vector<WindowBlock> make_blocks(const CandleSeries& series,
                                            const DecisionSeries& decisions) {
  const std::size_t n = series.size();
  if (n < kBlockMinutes)
    throw insufficient_data_error("need at least 60 minutes to form a block, got " +
                                  format_int(std::int64_t(n)));
  if (decisions.size() + 1 != n)
    throw domain_error("decision series not aligned: " + format_int(std::int64_t(decisions.size())) +
                       " decisions for " + format_int(std::int64_t(n)) + " candles");
  for (std::size_t i = 1; i < n; ++i)
    if (series.candles[i].timestamp <= series.candles[i - 1].timestamp)
      throw validation_error("candles not strictly increasing in time");

  const std::size_t n_blocks = n / kBlockMinutes;
  std::vector<WindowBlock> out;
  out.reserve(n_blocks);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const std::size_t base = b * kBlockMinutes;
    WindowBlock block;
    block.market_id = series.market_id;
    block.block_index = static_cast<int>(b);
    block.start = base;
    block.closes.reserve(kWindowMinutes);
    block.volumes.reserve(kWindowMinutes);
    block.decisions.reserve(kWindowMinutes);
    for (std::size_t j = 0; j < kWindowMinutes; ++j) {
      block.closes.push_back(series.candles[base + j].close);
      block.volumes.push_back(series.candles[base + j].volume);
      // label of the return entering minute j+1; the very first minute of
      // the series has no prior transition and reads as Hold
      block.decisions.push_back(base + j == 0 ? Decision::hold
                                              : decisions.decisions[base + j - 1]);
    }
    block.target_decision = decisions.decisions[base + kWindowMinutes - 1];
    block.target_return =
        std::log(series.candles[base + kWindowMinutes].close / series.candles[base + kWindowMinutes - 1].close);
    out.push_back(std::move(block));
  }
  return out;
}

}  // namespace regimecast
