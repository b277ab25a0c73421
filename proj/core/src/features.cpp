#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "eeq/error.hpp"
#include "eeq/xai.hpp"

namespace eeq::xai {

namespace {

using namespace feature;

constexpr std::array<std::string_view, 16> kLocaleFeatures{
    kWhiteShare,          kBlackShare,           kAsianShare,
    kOtherShare,          kHispanicShare,        kRenterShare,
    kOwnerShare,          kBuiltPre1960Share,    kBuilt1960To1979Share,
    kBuilt1980To1999Share, kBuilt2000PlusShare,  kLowIncomeShare,
    kModerateIncomeShare, kHighIncomeShare,      kMedianHouseholdIncome,
    kParticipationRate,
};

constexpr std::array<std::string_view, 5> kRaceGroup{
    kWhiteShare, kBlackShare, kAsianShare, kOtherShare, kHispanicShare};
constexpr std::array<std::string_view, 2> kTenureGroup{kOwnerShare, kRenterShare};
constexpr std::array<std::string_view, 3> kIncomeGroup{
    kLowIncomeShare, kModerateIncomeShare, kHighIncomeShare};
constexpr std::array<std::string_view, 4> kYearBuiltGroup{
    kBuiltPre1960Share, kBuilt1960To1979Share, kBuilt1980To1999Share,
    kBuilt2000PlusShare};

}  // namespace

std::span<const std::string_view> locale_feature_names() noexcept {
  return kLocaleFeatures;
}

std::span<const std::string_view> feature_group(std::string_view group) noexcept {
  if (group == "race") return kRaceGroup;
  if (group == "tenure") return kTenureGroup;
  if (group == "income") return kIncomeGroup;
  if (group == "year_built") return kYearBuiltGroup;
  return {};
}

std::vector<std::string> expand_feature_groups(std::span<const std::string> tokens) {
  std::vector<std::string> out;
  for (const auto& token : tokens) {
    const auto group = feature_group(token);
    if (group.empty()) {
      out.push_back(token);
    } else {
      out.insert(out.end(), group.begin(), group.end());
    }
  }
  return out;
}

FeatureMatrix::FeatureMatrix(std::vector<std::string> feature_names,
                             std::vector<double> values, std::vector<double> target,
                             std::vector<std::string> row_ids)
    : names_(std::move(feature_names)),
      values_(std::move(values)),
      target_(std::move(target)),
      row_ids_(std::move(row_ids)) {
  if (target_.empty() || names_.empty()) {
    throw Error(ErrorCode::InsufficientData, "feature_matrix",
                "need at least one row and one feature");
  }
  if (values_.size() != target_.size() * names_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "values",
                std::to_string(values_.size()) + " cells for " +
                    std::to_string(target_.size()) + " x " +
                    std::to_string(names_.size()));
  }
  if (row_ids_.size() != target_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "row_ids",
                std::to_string(row_ids_.size()) + " ids for " +
                    std::to_string(target_.size()) + " rows");
  }
  std::set<std::string_view> seen;
  for (const auto& n : names_) {
    if (!seen.insert(n).second) {
      throw Error(ErrorCode::InvalidInput, n, "duplicate feature name");
    }
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(values_.begin(), values_.end(), finite)) {
    throw Error(ErrorCode::InvalidInput, "values", "non-finite feature value");
  }
  if (!std::all_of(target_.begin(), target_.end(), finite)) {
    throw Error(ErrorCode::InvalidInput, "target", "non-finite target value");
  }
}

std::vector<double> FeatureMatrix::column(std::size_t c) const {
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, c);
  return out;
}

std::optional<std::size_t> FeatureMatrix::index_of(std::string_view name) const noexcept {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

FeatureMatrix build_feature_matrix(const Snapshot& snapshot) {
  std::vector<std::string> names(kLocaleFeatures.begin(), kLocaleFeatures.end());
  std::vector<double> values;
  std::vector<double> target;
  std::vector<std::string> ids;
  values.reserve(snapshot.records.size() * names.size());

  for (const auto& r : snapshot.records) {
    const double pop = r.total_population;
    const double units = r.owner_occupied + r.renter_occupied;
    const auto& yb = r.year_built_counts;
    const double stock = yb.pre1960 + yb.b1960_1979 + yb.b1980_1999 + yb.b2000_plus;
    const auto& ib = r.income_bin_counts;
    const double households = ib.low + ib.moderate + ib.high;

    const double row[] = {
        r.race_counts.white / pop,
        r.race_counts.black / pop,
        r.race_counts.asian / pop,
        r.race_counts.other / pop,
        r.hispanic_count / pop,
        r.renter_occupied / units,
        r.owner_occupied / units,
        yb.pre1960 / stock,
        yb.b1960_1979 / stock,
        yb.b1980_1999 / stock,
        yb.b2000_plus / stock,
        ib.low / households,
        ib.moderate / households,
        ib.high / households,
        r.median_household_income,
        r.program_participation_rate,
    };
    static_assert(std::size(row) == kLocaleFeatures.size());
    values.insert(values.end(), std::begin(row), std::end(row));
    target.push_back(r.annual_kwh_per_household);
    ids.push_back(r.locale_id);
  }
  return FeatureMatrix(std::move(names), std::move(values), std::move(target),
                       std::move(ids));
}

}  // namespace eeq::xai
