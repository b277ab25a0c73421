#include <algorithm>
#include <cmath>
#include <numeric>

#include "eeq/error.hpp"
#include "eeq/xai.hpp"

namespace eeq::xai {

namespace {

struct Split {
  int feature = TreeNode::kLeaf;
  double threshold = 0.0;
  double decrease = 0.0;
};

double midpoint(double lo, double hi) {
  double mid = lo / 2.0 + hi / 2.0;
  // Rounding can land on `hi`, which would move it to the left side.
  if (!(mid < hi) || mid < lo) mid = lo;
  return mid;
}

class Builder {
 public:
  Builder(const FeatureMatrix& m, const TreeParams& p) : m_(m), p_(p) {}

  RegressionTree run() {
    std::vector<std::size_t> all(m_.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    tree_.n_features = m_.cols();
    grow(all, 0);
    return std::move(tree_);
  }

 private:
  int grow(const std::vector<std::size_t>& rows, int depth) {
    const auto n = static_cast<double>(rows.size());
    double sum = 0.0;
    for (auto r : rows) sum += m_.target()[r];
    const double mean = sum / n;
    double ss = 0.0;
    for (auto r : rows) {
      const double c = m_.target()[r] - mean;
      ss += c * c;
    }

    const int id = static_cast<int>(tree_.nodes.size());
    TreeNode node;
    node.n_samples = rows.size();
    node.value = mean;
    node.impurity = ss / n;
    tree_.nodes.push_back(node);

    const double first = m_.target()[rows.front()];
    const bool pure = std::all_of(rows.begin(), rows.end(),
                                  [&](auto r) { return m_.target()[r] == first; });
    const auto min_leaf = static_cast<std::size_t>(p_.min_samples_leaf);
    if (pure || depth >= p_.max_depth || rows.size() < 2 * min_leaf) return id;

    const Split best = find_split(rows, mean, node.impurity);
    if (best.feature == TreeNode::kLeaf) return id;
    const double tol = kSplitTieTolerance * node.impurity;
    if (best.decrease + tol < p_.min_impurity_decrease) return id;

    std::vector<std::size_t> left, right;
    for (auto r : rows) {
      (m_.at(r, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right)
          .push_back(r);
    }
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);

    TreeNode& self = tree_.nodes[static_cast<std::size_t>(id)];
    self.feature = best.feature;
    self.threshold = best.threshold;
    self.impurity_decrease = best.decrease;
    self.left = l;
    self.right = r;
    return id;
  }

  Split find_split(const std::vector<std::size_t>& rows, double mean,
                   double impurity) const {
    const std::size_t n = rows.size();
    const auto nd = static_cast<double>(n);
    const auto min_leaf = static_cast<std::size_t>(p_.min_samples_leaf);
    const double tol = kSplitTieTolerance * impurity;

    Split best;
    bool have = false;
    std::vector<std::size_t> order(rows);
    std::vector<double> prefix(n + 1);

    for (std::size_t f = 0; f < m_.cols(); ++f) {
      order = rows;
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
        return m_.at(a, f) < m_.at(b, f);
      });
      prefix[0] = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + (m_.target()[order[i]] - mean);
      }
      const double total = prefix[n];

      for (std::size_t i = min_leaf; i + min_leaf <= n; ++i) {
        const double lo = m_.at(order[i - 1], f);
        const double hi = m_.at(order[i], f);
        if (!(lo < hi)) continue;
        const double s_left = prefix[i];
        const double s_right = total - s_left;
        const auto n_left = static_cast<double>(i);
        const auto n_right = nd - n_left;
        const double decrease = std::max(
            0.0, (s_left * s_left / n_left + s_right * s_right / n_right -
                  total * total / nd) / nd);
        if (!have || decrease > best.decrease + tol) {
          best = {static_cast<int>(f), midpoint(lo, hi), decrease};
          have = true;
        }
      }
    }
    return best;
  }

  const FeatureMatrix& m_;
  const TreeParams& p_;
  RegressionTree tree_;
};

}  // namespace

void validate(const TreeParams& params) {
  if (params.max_depth < 1) {
    throw Error(ErrorCode::InvalidParams, "max_depth", "must be >= 1");
  }
  if (params.min_samples_leaf < 1) {
    throw Error(ErrorCode::InvalidParams, "min_samples_leaf", "must be >= 1");
  }
  if (!(params.min_impurity_decrease >= 0.0) ||
      !std::isfinite(params.min_impurity_decrease)) {
    throw Error(ErrorCode::InvalidParams, "min_impurity_decrease",
                "must be finite and >= 0");
  }
}

std::size_t RegressionTree::split_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      nodes.begin(), nodes.end(), [](const TreeNode& n) { return !n.is_leaf(); }));
}

int RegressionTree::depth() const noexcept {
  if (nodes.empty()) return 0;
  // Preorder layout: walk with an explicit stack of (node, depth).
  int deepest = 0;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    const auto& node = nodes[static_cast<std::size_t>(id)];
    if (!node.is_leaf()) {
      stack.emplace_back(node.left, d + 1);
      stack.emplace_back(node.right, d + 1);
    }
  }
  return deepest;
}

RegressionTree fit_tree(const FeatureMatrix& m, const TreeParams& params) {
  validate(params);
  if (m.rows() < 1) throw Error(ErrorCode::InsufficientData, "rows");
  return Builder(m, params).run();
}

std::size_t apply(const RegressionTree& tree, std::span<const double> row) {
  if (row.size() != tree.n_features) {
    throw Error(ErrorCode::DimensionMismatch, "row",
                std::to_string(row.size()) + " values for " +
                    std::to_string(tree.n_features) + " features");
  }
  std::size_t id = 0;
  while (!tree.nodes[id].is_leaf()) {
    const auto& node = tree.nodes[id];
    id = static_cast<std::size_t>(
        row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                      : node.right);
  }
  return id;
}

double predict(const RegressionTree& tree, std::span<const double> row) {
  return tree.nodes[apply(tree, row)].value;
}

std::vector<double> predict_all(const RegressionTree& tree, const FeatureMatrix& m) {
  std::vector<double> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r] = predict(tree, m.row(r));
  return out;
}

FeatureImportance feature_importance(const RegressionTree& tree,
                                     std::span<const std::string> feature_names) {
  if (feature_names.size() != tree.n_features) {
    throw Error(ErrorCode::DimensionMismatch, "feature_names",
                std::to_string(feature_names.size()) + " names for " +
                    std::to_string(tree.n_features) + " features");
  }
  std::vector<double> raw(tree.n_features, 0.0);
  if (!tree.nodes.empty()) {
    const auto total = static_cast<double>(tree.nodes.front().n_samples);
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) continue;
      raw[static_cast<std::size_t>(node.feature)] +=
          static_cast<double>(node.n_samples) / total * node.impurity_decrease;
    }
  }
  const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);

  FeatureImportance out;
  out.reserve(raw.size());
  for (std::size_t f = 0; f < raw.size(); ++f) {
    out.push_back({feature_names[f], sum > 0.0 ? raw[f] / sum : 0.0});
  }
  std::sort(out.begin(), out.end(), [](const FeatureWeight& a, const FeatureWeight& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.feature < b.feature;
  });
  return out;
}

}  // namespace eeq::xai
