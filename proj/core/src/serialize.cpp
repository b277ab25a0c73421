#include "eeq/serialize.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

#include "csv.hpp"
#include "eeq/error.hpp"

namespace eeq {

using nlohmann::json;

namespace {

json parse_or_throw(std::string_view text, std::string_view what) {
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::InvalidInput, std::string(what), "not valid JSON");
  }
  return doc;
}

template <typename F>
auto guarded(std::string_view what, F&& body) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string(what), e.what());
  }
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_from(const json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace

std::string burden_report_to_json(const BurdenReport& report) {
  json doc{
      {"locale_id", report.locale_id},
      {"energy_burden_pct", report.energy_burden_pct},
      {"state_average_pct", report.state_average_pct},
      {"status", std::string(to_string(report.status))},
      {"message", report.message},
  };
  if (report.tips) doc["tips"] = *report.tips;
  return doc.dump();
}

namespace xai {

std::string importance_to_json(const FeatureImportance& importance) {
  json doc = json::array();
  for (const auto& fw : importance) {
    doc.push_back({{"feature", fw.feature}, {"weight", fw.weight}});
  }
  return doc.dump(2) + "\n";
}

FeatureImportance importance_from_json(std::string_view text) {
  const json doc = parse_or_throw(text, "importance");
  return guarded("importance", [&] {
    if (!doc.is_array()) {
      throw Error(ErrorCode::InvalidInput, "importance", "expected an array");
    }
    FeatureImportance out;
    for (const auto& item : doc) {
      out.push_back({item.at("feature").get<std::string>(), item.at("weight").get<double>()});
    }
    return out;
  });
}

std::string metrics_to_json(const ModelMetrics& metrics, std::size_t n_samples) {
  const json doc{
      {"n_samples", n_samples},
      {"r_squared", optional_number(metrics.r_squared)},
      {"rmse", metrics.rmse},
  };
  return doc.dump(2) + "\n";
}

ModelMetrics metrics_from_json(std::string_view text) {
  const json doc = parse_or_throw(text, "metrics");
  return guarded("metrics", [&] {
    ModelMetrics m;
    m.r_squared = optional_from(doc.at("r_squared"));
    m.rmse = doc.at("rmse").get<double>();
    return m;
  });
}

std::string tree_to_json(const RegressionTree& tree,
                         std::span<const std::string> feature_names) {
  if (feature_names.size() != tree.n_features) {
    throw Error(ErrorCode::DimensionMismatch, "feature_names");
  }
  json nodes = json::array();
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& n = tree.nodes[i];
    json node{
        {"id", i},
        {"n_samples", n.n_samples},
        {"value", n.value},
        {"impurity", n.impurity},
    };
    if (n.is_leaf()) {
      node["leaf"] = true;
    } else {
      node["leaf"] = false;
      node["feature"] = n.feature;
      node["feature_name"] = feature_names[static_cast<std::size_t>(n.feature)];
      node["threshold"] = n.threshold;
      node["left"] = n.left;
      node["right"] = n.right;
      node["impurity_decrease"] = n.impurity_decrease;
    }
    nodes.push_back(std::move(node));
  }
  const json doc{
      {"n_features", tree.n_features},
      {"feature_names", std::vector<std::string>(feature_names.begin(), feature_names.end())},
      {"nodes", std::move(nodes)},
  };
  return doc.dump(2) + "\n";
}

RegressionTree tree_from_json(std::string_view text) {
  const json doc = parse_or_throw(text, "tree");
  return guarded("tree", [&] {
    RegressionTree tree;
    tree.n_features = doc.at("n_features").get<std::size_t>();
    for (const auto& j : doc.at("nodes")) {
      TreeNode n;
      n.n_samples = j.at("n_samples").get<std::size_t>();
      n.value = j.at("value").get<double>();
      n.impurity = j.at("impurity").get<double>();
      if (!j.at("leaf").get<bool>()) {
        n.feature = j.at("feature").get<int>();
        n.threshold = j.at("threshold").get<double>();
        n.left = j.at("left").get<int>();
        n.right = j.at("right").get<int>();
        n.impurity_decrease = j.at("impurity_decrease").get<double>();
      }
      tree.nodes.push_back(n);
    }
    const auto count = static_cast<int>(tree.nodes.size());
    for (const auto& n : tree.nodes) {
      if (n.is_leaf()) continue;
      if (n.feature < 0 || static_cast<std::size_t>(n.feature) >= tree.n_features ||
          n.left <= 0 || n.left >= count || n.right <= 0 || n.right >= count) {
        throw Error(ErrorCode::InvalidInput, "tree", "node index out of range");
      }
    }
    if (tree.nodes.empty()) throw Error(ErrorCode::InvalidInput, "tree", "no nodes");
    return tree;
  });
}

std::string pcc_to_json(const PccMatrix& matrix) {
  json values = json::array();
  for (const auto& row : matrix.values) {
    json r = json::array();
    for (const auto& v : row) r.push_back(optional_number(v));
    values.push_back(std::move(r));
  }
  const json doc{
      {"row_labels", matrix.row_labels},
      {"col_labels", matrix.col_labels},
      {"values", std::move(values)},
  };
  return doc.dump();
}

PccMatrix pcc_from_json(std::string_view text) {
  const json doc = parse_or_throw(text, "pcc");
  return guarded("pcc", [&] {
    PccMatrix m;
    m.row_labels = doc.at("row_labels").get<std::vector<std::string>>();
    m.col_labels = doc.at("col_labels").get<std::vector<std::string>>();
    for (const auto& row : doc.at("values")) {
      auto& out = m.values.emplace_back();
      for (const auto& v : row) out.push_back(optional_from(v));
    }
    return m;
  });
}

std::string pcc_to_csv(const PccMatrix& matrix) {
  std::string out = "feature";
  for (const auto& label : matrix.col_labels) {
    out += ',';
    out += detail::escape_csv_field(label);
  }
  out += '\n';
  for (std::size_t i = 0; i < matrix.row_labels.size(); ++i) {
    out += detail::escape_csv_field(matrix.row_labels[i]);
    for (const auto& v : matrix.values[i]) {
      out += ',';
      if (v) out += detail::format_double(*v);
    }
    out += '\n';
  }
  return out;
}

PccMatrix pcc_from_csv(std::string_view text) {
  const auto records = detail::read_csv(text);
  if (records.empty()) throw Error(ErrorCode::InvalidInput, "pcc", "empty CSV");
  PccMatrix m;
  const auto& header = records.front().fields;
  m.col_labels.assign(header.begin() + 1, header.end());
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& fields = records[r].fields;
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::InvalidInput, "pcc", "ragged row");
    }
    m.row_labels.push_back(fields.front());
    auto& row = m.values.emplace_back();
    for (std::size_t c = 1; c < fields.size(); ++c) {
      if (fields[c].empty()) {
        row.emplace_back(std::nullopt);
        continue;
      }
      double v = 0.0;
      const char* first = fields[c].data();
      const char* last = first + fields[c].size();
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc{} || ptr != last) {
        throw Error(ErrorCode::InvalidInput, "pcc", "bad number '" + fields[c] + "'");
      }
      row.emplace_back(v);
    }
  }
  return m;
}

}  // namespace xai
}  // namespace eeq
