#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discarg/parser.hpp"
#include "discarg/rst.hpp"

namespace discarg {

struct CoefficientValue {
  std::string relation;
  double forward = 0.0;   // coefficient of an arc carrying the relation
  double inverted = 0.0;  // coefficient of an arc opposing the relation
};

// Per-label coefficient read-out of a label-aware model: ReLU(theta + b) for
// each direction. Other modes raise an unsupported-mode error.
std::vector<CoefficientValue> export_coefficients(const ModelParams& params,
                                                  const RelationInventory& inventory);

enum class CoefficientBucket { kCompanion, kOpposing, kVaguelyCorrelated, kVaguelyOpposed };
std::string_view to_string(CoefficientBucket bucket);

// A mean further from 1 than the spread across models is decisive
// (companion above 1, opposing below); otherwise the relation is vague.
CoefficientBucket bucket_for(double mean, double std);

struct CoefficientSummary {
  std::string relation;
  RelationDirection direction = RelationDirection::kForward;
  double mean = 0.0;
  double std = 0.0;  // population deviation across models
  CoefficientBucket bucket = CoefficientBucket::kOpposing;
};

// Aggregates the exports of several models (e.g. folds) trained with the
// same inventory.
std::vector<CoefficientSummary> aggregate_coefficients(
    std::span<const std::vector<CoefficientValue>> exports);

// Columns: relation, direction, mean, std, bucket.
std::string coefficients_tsv(std::span<const CoefficientSummary> rows);

}  // namespace discarg
