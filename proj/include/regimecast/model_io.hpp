#pragma once

#include <memory>
#include <string>

#include "regimecast/knn.hpp"
#include "regimecast/model.hpp"
#include "regimecast/random_forest.hpp"
#include "regimecast/random_policy.hpp"

namespace regimecast {

inline std::unique_ptr<Model> model_from_json(const ordered_json& j) {
  const std::string algorithm = j.at("algorithm").get<std::string>();
  if (algorithm == "knn") return KnnModel::from_json(j);
  if (algorithm == "random_forest") return ForestModel::from_json(j);
  if (algorithm == "random_policy") return RandomPolicyModel::from_json(j);
  throw parse_error("unknown algorithm in model artifact: '" + algorithm + "'");
}

}  // namespace regimecast
