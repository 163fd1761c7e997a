#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "regimecast/labeling.hpp"

namespace regimecast {

using ordered_json = nlohmann::ordered_json;

/// A trained decision classifier. Predictions depend only on the learned
/// state and the input features; the evaluation harness treats every
/// algorithm through this surface.
class Model {
 public:
  virtual ~Model() = default;
  virtual std::string_view algorithm() const = 0;
  virtual Decision predict(std::span<const double> features) const = 0;
  virtual std::vector<Decision> predict_series(
      const std::vector<std::vector<double>>& rows) const {
    std::vector<Decision> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(predict(row));
    return out;
  }
  virtual ordered_json to_json() const = 0;
};

// model_from_json lives in model_io.hpp so that each concrete model header
// stays independent of the others.

}  // namespace regimecast
