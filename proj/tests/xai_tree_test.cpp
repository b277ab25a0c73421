#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "eeq/error.hpp"
#include "eeq/xai.hpp"
#include "oracles/split_oracle.hpp"
#include "support.hpp"

using namespace eeq;
using namespace eeq::xai;

namespace {

FeatureMatrix matrix(const std::vector<std::vector<double>>& rows,
                     const std::vector<double>& target,
                     std::vector<std::string> names = {}) {
  const std::size_t d = rows.front().size();
  if (names.empty()) {
    for (std::size_t f = 0; f < d; ++f) names.push_back("f" + std::to_string(f));
  }
  std::vector<double> values;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    values.insert(values.end(), rows[i].begin(), rows[i].end());
    char id[8];
    std::snprintf(id, sizeof id, "%05zu", i);
    ids.emplace_back(id);
  }
  return FeatureMatrix(std::move(names), std::move(values), target, std::move(ids));
}

const TreeParams kUnrestricted{64, 1, 0.0};

}  // namespace

TEST_CASE("build_feature_matrix computes shares") {
  std::mt19937_64 rng(9);
  Snapshot s;
  for (const auto& id : {"07001", "07002", "07003"}) s.records.push_back(test::random_record(rng, id));
  s.records[0].owner_occupied = 60;
  s.records[0].renter_occupied = 40;
  s.records[1].total_population = 500;
  s.records[1].race_counts = {500, 0, 0, 0};
  s.records[1].hispanic_count = 0;

  const auto m = build_feature_matrix(s);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == locale_feature_names().size());
  CHECK(m.row_ids() == std::vector<std::string>{"07001", "07002", "07003"});
  auto col = [&](std::string_view name) { return *m.index_of(name); };
  CHECK(m.at(0, col("renter_share")) == 0.4);
  CHECK(m.at(0, col("owner_share")) == 0.6);
  CHECK(m.at(1, col("white_share")) == 1.0);
  CHECK(m.at(1, col("black_share")) == 0.0);
  CHECK(m.at(1, col("asian_share")) == 0.0);
  CHECK(m.at(1, col("hispanic_share")) == 0.0);
  CHECK(m.at(2, col("median_household_income")) == s.records[2].median_household_income);
  CHECK(m.target()[2] == s.records[2].annual_kwh_per_household);
  const auto& yb = s.records[2].year_built_counts;
  CHECK(m.at(2, col("built_pre1960_share")) ==
        yb.pre1960 / (yb.pre1960 + yb.b1960_1979 + yb.b1980_1999 + yb.b2000_plus));
}

TEST_CASE("FeatureMatrix rejects bad shapes and values") {
  CHECK_THROWS_AS(FeatureMatrix({"a"}, {}, {}, {}), Error);
  CHECK_THROWS_AS(FeatureMatrix({"a", "b"}, {1.0}, {1.0}, {"00001"}), Error);
  CHECK_THROWS_AS(FeatureMatrix({"a", "a"}, {1.0, 2.0}, {1.0}, {"00001"}), Error);
  CHECK_THROWS_AS(FeatureMatrix({"a"}, {NAN}, {1.0}, {"00001"}), Error);
  CHECK_THROWS_AS(FeatureMatrix({"a"}, {1.0}, {1.0}, {}), Error);
}

TEST_CASE("feature groups expand in place") {
  const std::vector<std::string> tokens{"tenure", "median_household_income", "race"};
  const auto names = expand_feature_groups(tokens);
  CHECK(names == std::vector<std::string>{"owner_share", "renter_share",
                                          "median_household_income", "white_share",
                                          "black_share", "asian_share", "other_share",
                                          "hispanic_share"});
  CHECK(feature_group("income").size() == 3);
  CHECK(feature_group("year_built").size() == 4);
  CHECK(feature_group("nope").empty());
}

TEST_CASE("constant target gives a single leaf") {
  const auto m = matrix({{1, 2}, {3, 4}, {5, 6}, {7, 8}}, {4.5, 4.5, 4.5, 4.5});
  const auto tree = fit_tree(m, kUnrestricted);
  REQUIRE(tree.nodes.size() == 1);
  CHECK(tree.nodes[0].is_leaf());
  CHECK(tree.nodes[0].value == 4.5);
  CHECK(predict(tree, std::vector<double>{100, -100}) == 4.5);
  const auto imp = feature_importance(tree, m.feature_names());
  for (const auto& fw : imp) CHECK(fw.weight == 0.0);
}

TEST_CASE("single informative feature gives one pure split") {
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  for (int i = 0; i < 10; ++i) {
    rows.push_back({3.0, static_cast<double>(i + 1), -1.0});
    y.push_back(i + 1 > 5 ? 10.0 : 0.0);
  }
  const auto m = matrix(rows, y);
  const auto tree = fit_tree(m, kUnrestricted);
  REQUIRE(tree.nodes.size() == 3);
  CHECK(tree.nodes[0].feature == 1);
  CHECK(tree.nodes[0].threshold == 5.5);
  CHECK(tree.nodes[tree.nodes[0].left].value == 0.0);
  CHECK(tree.nodes[tree.nodes[0].right].value == 10.0);
  CHECK(predict(tree, std::vector<double>{3, 6, -1}) == 10.0);
  CHECK(predict(tree, std::vector<double>{3, 5, -1}) == 0.0);
  CHECK_THROWS_AS(predict(tree, std::vector<double>{1, 2}), Error);

  const auto imp = feature_importance(tree, m.feature_names());
  CHECK(imp[0] == FeatureWeight{"f1", 1.0});
  CHECK(imp[1].weight == 0.0);
  CHECK(imp[2].weight == 0.0);
  // zero-weight ties sort by name
  CHECK(imp[1].feature == "f0");
  CHECK(imp[2].feature == "f2");
}

TEST_CASE("importance of a two-level tree matches hand accounting") {
  // Root splits f0 (decrease 30.25 over 4 rows); each child splits f1 with
  // decreases 1 and 4 over 2 rows. Raw: f0 = 30.25, f1 = 0.5*1 + 0.5*4.
  const auto m = matrix({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0, 2, 10, 14});
  const auto tree = fit_tree(m, kUnrestricted);
  CHECK(tree.split_count() == 3);
  CHECK(tree.nodes[0].feature == 0);
  CHECK(tree.nodes[0].impurity == doctest::Approx(32.75));
  CHECK(tree.nodes[0].impurity_decrease == doctest::Approx(30.25));
  const auto imp = feature_importance(tree, m.feature_names());
  CHECK(imp[0].feature == "f0");
  CHECK(imp[0].weight == doctest::Approx(121.0 / 131.0).epsilon(1e-12));
  CHECK(imp[1].weight == doctest::Approx(10.0 / 131.0).epsilon(1e-12));
}

TEST_CASE("root split agrees with exhaustive enumeration on a 6x2 matrix") {
  const std::vector<std::vector<double>> rows{{1.0, 7.0}, {2.0, 3.0}, {3.0, 9.0},
                                              {4.0, 1.0}, {5.0, 5.0}, {6.0, 2.0}};
  const std::vector<double> y{3.0, 8.0, 1.0, 9.0, 4.0, 7.5};
  const auto best = oracle::SplitEnumerator(rows, y).best(1, kSplitTieTolerance);
  REQUIRE(best.has_value());
  const auto tree = fit_tree(matrix(rows, y), kUnrestricted);
  CHECK(static_cast<std::size_t>(tree.nodes[0].feature) == best->feature);
  CHECK(tree.nodes[0].threshold == best->threshold);
  CHECK(tree.nodes[0].impurity_decrease == doctest::Approx(best->decrease).epsilon(1e-12));
}

TEST_CASE("ties go to the lowest feature index then the lowest threshold") {
  // Columns 0 and 1 are identical; every split on them ties.
  const auto m = matrix({{1, 1}, {2, 2}, {3, 3}, {4, 4}}, {0, 0, 1, 1});
  const auto tree = fit_tree(m, kUnrestricted);
  CHECK(tree.nodes[0].feature == 0);
  CHECK(tree.nodes[0].threshold == 2.5);

  // Symmetric target: thresholds 1.5 and 3.5 tie exactly; the lower wins.
  const auto sym = matrix({{1}, {2}, {3}, {4}}, {5, 0, 0, 5});
  const auto t2 = fit_tree(sym, {1, 1, 0.0});
  CHECK(t2.nodes[0].threshold == 1.5);
}

TEST_CASE("stopping rules") {
  std::mt19937_64 rng(4);
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  for (int i = 0; i < 40; ++i) {
    rows.push_back({test::uniform(rng, 0, 1), test::uniform(rng, 0, 1)});
    y.push_back(test::uniform(rng, 0, 100));
  }
  const auto m = matrix(rows, y);

  SUBCASE("max_depth") {
    for (int depth : {1, 2, 3}) CHECK(fit_tree(m, {depth, 1, 0.0}).depth() <= depth);
  }
  SUBCASE("min_samples_leaf") {
    const auto tree = fit_tree(m, {20, 7, 0.0});
    for (const auto& n : tree.nodes) {
      if (n.is_leaf()) CHECK(n.n_samples >= 7);
    }
    CHECK(fit_tree(m, {20, 21, 0.0}).nodes.size() == 1);
  }
  SUBCASE("min_impurity_decrease") {
    const auto full = fit_tree(m, {20, 1, 0.0});
    const auto pruned = fit_tree(m, {20, 1, 50.0});
    CHECK(pruned.nodes.size() < full.nodes.size());
    for (const auto& n : pruned.nodes) {
      if (!n.is_leaf()) CHECK(n.impurity_decrease >= 50.0);
    }
  }
  SUBCASE("invalid params") {
    CHECK_THROWS_AS(fit_tree(m, {0, 1, 0.0}), Error);
    CHECK_THROWS_AS(fit_tree(m, {3, 0, 0.0}), Error);
    CHECK_THROWS_AS(fit_tree(m, {3, 1, -1.0}), Error);
  }
}

TEST_CASE("structure invariants on random data") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = test::uniform_int(rng, 1, 60);
    const int d = test::uniform_int(rng, 1, 5);
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
    std::vector<double> y;
    for (auto& r : rows) {
      for (int f = 0; f < d; ++f) r.push_back(std::round(test::uniform(rng, 0, 6)));
      y.push_back(test::uniform(rng, -10, 10));
    }
    const TreeParams p{test::uniform_int(rng, 1, 8), test::uniform_int(rng, 1, 4), 0.0};
    const auto m = matrix(rows, y);
    const auto tree = fit_tree(m, p);
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) {
        CHECK(node.n_samples >= static_cast<std::size_t>(std::min(p.min_samples_leaf, n)));
      } else {
        CHECK(std::isfinite(node.threshold));
        CHECK(tree.nodes[node.left].n_samples + tree.nodes[node.right].n_samples ==
              node.n_samples);
      }
    }
    CHECK(tree.depth() <= p.max_depth);
    CHECK(fit_tree(m, p) == tree);

    const auto imp = feature_importance(tree, m.feature_names());
    double sum = 0.0;
    for (const auto& fw : imp) {
      CHECK(fw.weight >= 0.0);
      sum += fw.weight;
    }
    if (sum > 0.0) CHECK(std::abs(sum - 1.0) <= 1e-9);
    CHECK(std::is_sorted(imp.begin(), imp.end(), [](const auto& a, const auto& b) {
      return a.weight > b.weight || (a.weight == b.weight && a.feature < b.feature);
    }));
  }
}

TEST_CASE("memorization with unique rows") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = test::uniform_int(rng, 2, 40);
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int i = 0; i < n; ++i) {
      rows.push_back({static_cast<double>(i % 3), static_cast<double>(i / 3)});
      y.push_back(test::uniform(rng, 0, 1000));
    }
    const auto m = matrix(rows, y);
    const auto tree = fit_tree(m, {n, 1, 0.0});
    const auto pred = predict_all(tree, m);
    CHECK(pred == m.target());
    CHECK(rmse(pred, m.target()) == 0.0);
    CHECK(r_squared(pred, m.target()) == 1.0);
  }
  // XOR target: every first-level split has zero decrease, yet the tree
  // still separates the rows.
  const auto xor_m = matrix({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0, 1, 1, 0});
  const auto xor_tree = fit_tree(xor_m, {4, 1, 0.0});
  CHECK(predict_all(xor_tree, xor_m) == xor_m.target());
}

TEST_CASE("increasing affine transform of a column keeps every partition") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int i = 0; i < 50; ++i) {
      rows.push_back({std::round(test::uniform(rng, 0, 20)), std::round(test::uniform(rng, 0, 20)),
                      std::round(test::uniform(rng, 0, 20))});
      y.push_back(std::round(test::uniform(rng, 0, 50)));
    }
    const int col = test::uniform_int(rng, 0, 2);
    auto moved = rows;
    for (auto& r : moved) r[static_cast<std::size_t>(col)] = 3.0 * r[static_cast<std::size_t>(col)] + 7.0;

    const TreeParams p{5, 2, 0.0};
    const auto a = fit_tree(matrix(rows, y), p);
    const auto b = fit_tree(matrix(moved, y), p);
    REQUIRE(a.nodes.size() == b.nodes.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(xai::apply(a, rows[i]) == xai::apply(b, moved[i]));
    }
  }
}

TEST_CASE("permuting columns permutes importances") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int i = 0; i < 80; ++i) {
      std::vector<double> r{test::uniform(rng, 0, 1), test::uniform(rng, 0, 1),
                            test::uniform(rng, 0, 1), test::uniform(rng, 0, 1)};
      y.push_back(5 * r[0] + 3 * r[2] * r[2] + test::uniform(rng, 0, 0.5));
      rows.push_back(std::move(r));
    }
    const std::vector<std::size_t> perm{2, 0, 3, 1};
    std::vector<std::vector<double>> permuted;
    for (const auto& r : rows) {
      std::vector<double> pr;
      for (auto c : perm) pr.push_back(r[c]);
      permuted.push_back(std::move(pr));
    }
    const std::vector<std::string> names{"a", "b", "c", "d"};
    std::vector<std::string> permuted_names;
    for (auto c : perm) permuted_names.push_back(names[c]);

    const TreeParams p{4, 3, 0.0};
    const auto m1 = matrix(rows, y, names);
    const auto m2 = matrix(permuted, y, permuted_names);
    const auto i1 = feature_importance(fit_tree(m1, p), m1.feature_names());
    const auto i2 = feature_importance(fit_tree(m2, p), m2.feature_names());
    std::map<std::string, double> w1, w2;
    for (const auto& fw : i1) w1[fw.feature] = fw.weight;
    for (const auto& fw : i2) w2[fw.feature] = fw.weight;
    for (const auto& n : names) CHECK(w1[n] == doctest::Approx(w2[n]).epsilon(1e-12));
  }
}
