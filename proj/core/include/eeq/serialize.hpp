#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "eeq/burden.hpp"
#include "eeq/xai.hpp"

// Text forms of analysis results. Numbers are written with the shortest
// representation that reads back to the identical double. Readers throw
// Error{InvalidInput} on malformed documents.
namespace eeq {

std::string burden_report_to_json(const BurdenReport& report);

namespace xai {

/// [{"feature": ..., "weight": ...}, ...] in the given order.
std::string importance_to_json(const FeatureImportance& importance);
FeatureImportance importance_from_json(std::string_view text);

/// {"n_samples": n, "r_squared": r2 | null, "rmse": e}
std::string metrics_to_json(const ModelMetrics& metrics, std::size_t n_samples);
ModelMetrics metrics_from_json(std::string_view text);

std::string tree_to_json(const RegressionTree& tree,
                         std::span<const std::string> feature_names);
RegressionTree tree_from_json(std::string_view text);

/// {"row_labels": [...], "col_labels": [...], "values": [[r | null, ...], ...]}
std::string pcc_to_json(const PccMatrix& matrix);
PccMatrix pcc_from_json(std::string_view text);

/// Header row `feature,<col labels>`, then one row per row label. Undefined
/// correlations are empty cells.
std::string pcc_to_csv(const PccMatrix& matrix);
PccMatrix pcc_from_csv(std::string_view text);

}  // namespace xai
}  // namespace eeq
