#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eeq/ingest.hpp"
#include "eeq/rates.hpp"

namespace eeq {

/// Annual household usage, prices and income for one burden computation.
struct BurdenInputs {
  double annual_kwh = 0.0;        // E_e
  double electricity_rate = 0.0;  // R_e, USD/kWh
  double annual_therms = 0.0;     // E_h
  double heating_rate = 0.0;      // R_h, USD/therm
  double median_income = 0.0;     // M_i, USD/yr
};

/// Share of median household income spent on electricity plus heating, in
/// percent: ((E_e * R_e) + (E_h * R_h)) / M_i * 100. Not rounded.
///
/// Throws NonPositiveIncome when the income is <= 0 and InvalidInput for a
/// negative or non-finite usage or rate.
double compute_energy_burden(const BurdenInputs& in);

enum class BurdenStatus { Overburdened, BelowStateAverage };

std::string_view to_string(BurdenStatus status) noexcept;

struct BurdenReport {
  std::string locale_id;
  double energy_burden_pct = 0.0;
  double state_average_pct = 0.0;
  BurdenStatus status = BurdenStatus::BelowStateAverage;
  std::string message;
  std::optional<std::vector<std::string>> tips;  // set iff Overburdened

  bool operator==(const BurdenReport&) const = default;
};

/// The burden calculator for one locale: looks up its usage, prices it with
/// `rates`, and flags it as overburdened only when the burden is strictly
/// greater than the state average.
///
/// Throws UnknownLocale when the id is not in the snapshot.
BurdenReport evaluate_zip(std::string_view locale_id, const Snapshot& snapshot,
                          const RateSchedule& rates);

/// Same, priced with the snapshot's own rates.
BurdenReport evaluate_zip(std::string_view locale_id, const Snapshot& snapshot);

/// Fixed advice shown to overburdened households.
const std::vector<std::string>& tips_catalog();

}  // namespace eeq
