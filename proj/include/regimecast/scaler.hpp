#pragma once

#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "regimecast/error.hpp"
#include "regimecast/stats.hpp"

namespace regimecast {

enum class ScalerKind { minmax, zscore };

inline std::string_view to_string(ScalerKind k) {
  return k == ScalerKind::minmax ? "minmax" : "zscore";
}

inline ScalerKind scaler_kind_from_string(std::string_view s) {
  if (s == "minmax") return ScalerKind::minmax;
  if (s == "zscore") return ScalerKind::zscore;
  throw parse_error("unknown scaler kind '" + std::string(s) + "'");
}

/// Per-feature standardisation fitted on training rows only. Degenerate
/// features (zero range / zero variance) map to 0.5 under minmax and 0
/// under zscore, for any input.
struct Scaler {
  ScalerKind kind = ScalerKind::minmax;
  std::vector<double> p1;  // min or mean
  std::vector<double> p2;  // max-min or population stddev

  std::size_t dimension() const { return p1.size(); }

  static Scaler fit(const std::vector<std::vector<double>>& rows, ScalerKind kind) {
    if (rows.empty()) throw insufficient_data_error("cannot fit scaler on empty data");
    const std::size_t d = rows.front().size();
    Scaler s;
    s.kind = kind;
    s.p1.resize(d);
    s.p2.resize(d);
    std::vector<double> column(rows.size());
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != d) throw domain_error("ragged feature rows");
        column[i] = rows[i][j];
      }
      if (kind == ScalerKind::minmax) {
        const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
        s.p1[j] = *lo;
        s.p2[j] = *hi - *lo;
      } else {
        s.p1[j] = mean(column);
        s.p2[j] = stddev_population(column);
      }
    }
    return s;
  }

  double apply_one(double x, std::size_t j) const {
    if (p2[j] == 0.0) return kind == ScalerKind::minmax ? 0.5 : 0.0;
    return (x - p1[j]) / p2[j];
  }

  std::vector<double> apply(std::span<const double> row) const {
    if (row.size() != dimension()) throw domain_error("scaler dimension mismatch");
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) out[j] = apply_one(row[j], j);
    return out;
  }

  std::vector<std::vector<double>> apply(const std::vector<std::vector<double>>& rows) const {
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(apply(r));
    return out;
  }
};

}  // namespace regimecast
