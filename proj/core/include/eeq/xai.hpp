#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eeq/ingest.hpp"

namespace eeq::xai {

namespace feature {
inline constexpr std::string_view kWhiteShare = "white_share";
inline constexpr std::string_view kBlackShare = "black_share";
inline constexpr std::string_view kAsianShare = "asian_share";
inline constexpr std::string_view kOtherShare = "other_share";
inline constexpr std::string_view kHispanicShare = "hispanic_share";
inline constexpr std::string_view kRenterShare = "renter_share";
inline constexpr std::string_view kOwnerShare = "owner_share";
inline constexpr std::string_view kBuiltPre1960Share = "built_pre1960_share";
inline constexpr std::string_view kBuilt1960To1979Share = "built_1960_1979_share";
inline constexpr std::string_view kBuilt1980To1999Share = "built_1980_1999_share";
inline constexpr std::string_view kBuilt2000PlusShare = "built_2000_plus_share";
inline constexpr std::string_view kLowIncomeShare = "low_income_share";
inline constexpr std::string_view kModerateIncomeShare = "moderate_income_share";
inline constexpr std::string_view kHighIncomeShare = "high_income_share";
inline constexpr std::string_view kMedianHouseholdIncome = "median_household_income";
inline constexpr std::string_view kParticipationRate = "participation_rate";
}  // namespace feature

/// Column order produced by build_feature_matrix.
std::span<const std::string_view> locale_feature_names() noexcept;

/// Named feature sets used for correlation views: "race", "tenure",
/// "income", "year_built". Empty span for an unknown group.
std::span<const std::string_view> feature_group(std::string_view group) noexcept;

/// Replaces every token naming a feature group with that group's features,
/// keeping order. Other tokens pass through unchanged.
std::vector<std::string> expand_feature_groups(std::span<const std::string> tokens);

/// Dense n x d design matrix with a regression target and per-row ids.
class FeatureMatrix {
 public:
  /// `values` is row-major, n * d. Throws InsufficientData (n == 0 or d == 0),
  /// DimensionMismatch (shape), InvalidInput (non-finite value or duplicate
  /// feature name).
  FeatureMatrix(std::vector<std::string> feature_names, std::vector<double> values,
                std::vector<double> target, std::vector<std::string> row_ids);

  std::size_t rows() const noexcept { return target_.size(); }
  std::size_t cols() const noexcept { return names_.size(); }

  double at(std::size_t row, std::size_t col) const noexcept {
    return values_[row * names_.size() + col];
  }
  std::span<const double> row(std::size_t r) const noexcept {
    return {values_.data() + r * names_.size(), names_.size()};
  }
  std::vector<double> column(std::size_t c) const;
  std::optional<std::size_t> index_of(std::string_view name) const noexcept;

  const std::vector<std::string>& feature_names() const noexcept { return names_; }
  const std::vector<double>& target() const noexcept { return target_; }
  const std::vector<std::string>& row_ids() const noexcept { return row_ids_; }

 private:
  std::vector<std::string> names_;
  std::vector<double> values_;
  std::vector<double> target_;
  std::vector<std::string> row_ids_;
};

/// One row per locale (snapshot order), population / housing / income
/// shares plus median income and program participation; the target is
/// annual kWh per household.
FeatureMatrix build_feature_matrix(const Snapshot& snapshot);

struct TreeParams {
  int max_depth = 6;
  int min_samples_leaf = 5;
  double min_impurity_decrease = 0.0;
};

/// Throws InvalidParams.
void validate(const TreeParams& params);

struct TreeNode {
  static constexpr int kLeaf = -1;

  int feature = kLeaf;  // split feature index, kLeaf for leaves
  double threshold = 0.0;
  int left = -1;   // rows with value <= threshold
  int right = -1;
  std::size_t n_samples = 0;
  double value = 0.0;              // mean target of the node's rows
  double impurity = 0.0;           // target variance of the node's rows
  double impurity_decrease = 0.0;  // impurity - weighted child impurity

  bool is_leaf() const noexcept { return feature == kLeaf; }
  bool operator==(const TreeNode&) const = default;
};

/// Binary regression tree, nodes in depth-first preorder; nodes[0] is the
/// root.
struct RegressionTree {
  std::size_t n_features = 0;
  std::vector<TreeNode> nodes;

  std::size_t split_count() const noexcept;
  std::size_t leaf_count() const noexcept { return nodes.size() - split_count(); }
  int depth() const noexcept;
  bool operator==(const RegressionTree&) const = default;
};

/// Relative tolerance (scaled by the node's impurity) within which two
/// candidate splits count as tied.
inline constexpr double kSplitTieTolerance = 1e-12;

/// Greedy CART with variance impurity. At each node every feature is scanned
/// in index order and every midpoint between consecutive distinct values in
/// ascending order; a candidate replaces the incumbent only when its
/// impurity decrease is larger by more than kSplitTieTolerance * impurity,
/// so ties go to the lowest feature index, then the lowest threshold.
/// A node becomes a leaf when its targets are all equal, at max_depth, when
/// no split leaves min_samples_leaf rows on both sides, or when the best
/// decrease is below min_impurity_decrease.
RegressionTree fit_tree(const FeatureMatrix& m, const TreeParams& params);

/// Index of the leaf reached by `row`. Throws DimensionMismatch.
std::size_t apply(const RegressionTree& tree, std::span<const double> row);
double predict(const RegressionTree& tree, std::span<const double> row);
std::vector<double> predict_all(const RegressionTree& tree, const FeatureMatrix& m);

struct FeatureWeight {
  std::string feature;
  double weight = 0.0;
  bool operator==(const FeatureWeight&) const = default;
};

using FeatureImportance = std::vector<FeatureWeight>;

/// Sum over splits on each feature of (n_node / n_root) * impurity_decrease,
/// normalized to 1. All zeros when the tree has no split (or no split
/// reduced impurity). Sorted by weight descending, then name ascending.
FeatureImportance feature_importance(const RegressionTree& tree,
                                     std::span<const std::string> feature_names);

/// 1 - SS_res / SS_tot. Throws LengthMismatch, InsufficientData (n < 2),
/// ZeroVarianceTarget.
double r_squared(std::span<const double> predicted, std::span<const double> actual);
/// Throws LengthMismatch, InsufficientData (n < 2).
double rmse(std::span<const double> predicted, std::span<const double> actual);

struct ModelMetrics {
  std::optional<double> r_squared;  // nullopt for a constant target
  double rmse = 0.0;
};

ModelMetrics evaluate(std::span<const double> predicted, std::span<const double> actual);

/// Pearson's r, clamped to [-1, 1]. nullopt when either vector is constant.
/// Throws LengthMismatch, InsufficientData (n < 2).
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct PccMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<std::optional<double>>> values;  // nullopt = undefined

  bool operator==(const PccMatrix&) const = default;
};

/// values[i][j] = pearson(group_a[i], group_b[j]). Throws UnknownFeature
/// naming the first unknown column.
PccMatrix pcc_matrix(const FeatureMatrix& m, std::span<const std::string> group_a,
                     std::span<const std::string> group_b);

}  // namespace eeq::xai
