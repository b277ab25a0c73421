#include <algorithm>
#include <cmath>

#include "eeq/error.hpp"
#include "eeq/xai.hpp"

namespace eeq::xai {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch, "",
                std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  if (a.size() < 2) {
    throw Error(ErrorCode::InsufficientData, "", "need at least 2 values");
  }
}

bool constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sum_squared_error(std::span<const double> predicted, std::span<const double> actual) {
  double ss = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double e = actual[i] - predicted[i];
    ss += e * e;
  }
  return ss;
}

}  // namespace

double r_squared(std::span<const double> predicted, std::span<const double> actual) {
  check_pair(predicted, actual);
  if (constant(actual)) throw Error(ErrorCode::ZeroVarianceTarget, "actual");
  const double mu = mean(actual);
  double ss_tot = 0.0;
  for (double y : actual) ss_tot += (y - mu) * (y - mu);
  return 1.0 - sum_squared_error(predicted, actual) / ss_tot;
}

double rmse(std::span<const double> predicted, std::span<const double> actual) {
  check_pair(predicted, actual);
  return std::sqrt(sum_squared_error(predicted, actual) /
                   static_cast<double>(actual.size()));
}

ModelMetrics evaluate(std::span<const double> predicted, std::span<const double> actual) {
  ModelMetrics m;
  m.rmse = rmse(predicted, actual);
  if (!constant(actual)) m.r_squared = r_squared(predicted, actual);
  return m;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  if (constant(x) || constant(y)) return std::nullopt;
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const double denom = std::sqrt(sxx * syy);
  if (!(denom > 0.0) || !std::isfinite(denom)) return std::nullopt;
  return std::clamp(sxy / denom, -1.0, 1.0);
}

PccMatrix pcc_matrix(const FeatureMatrix& m, std::span<const std::string> group_a,
                     std::span<const std::string> group_b) {
  auto columns = [&](std::span<const std::string> names) {
    std::vector<std::vector<double>> cols;
    cols.reserve(names.size());
    for (const auto& name : names) {
      const auto idx = m.index_of(name);
      if (!idx) throw Error(ErrorCode::UnknownFeature, name);
      cols.push_back(m.column(*idx));
    }
    return cols;
  };
  const auto a = columns(group_a);
  const auto b = columns(group_b);

  PccMatrix out;
  out.row_labels.assign(group_a.begin(), group_a.end());
  out.col_labels.assign(group_b.begin(), group_b.end());
  out.values.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.values[i].reserve(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
      out.values[i].push_back(m.rows() < 2 ? std::nullopt : pearson(a[i], b[j]));
    }
  }
  return out;
}

}  // namespace eeq::xai
