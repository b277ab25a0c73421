#include "eeq/burden.hpp"

#include <cmath>

#include "eeq/error.hpp"

namespace eeq {

namespace {

void require_usable(std::string_view field, double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw Error(ErrorCode::InvalidInput, std::string(field),
                "must be finite and >= 0");
  }
}

}  // namespace

void validate(const RateSchedule& rates) {
  require_usable("electricity_rate", rates.electricity_rate);
  require_usable("heating_rate", rates.heating_rate);
  require_usable("state_average_burden_pct", rates.state_average_burden_pct);
}

double compute_energy_burden(const BurdenInputs& in) {
  if (!(in.median_income > 0.0) || !std::isfinite(in.median_income)) {
    throw Error(ErrorCode::NonPositiveIncome, "median_income");
  }
  require_usable("annual_kwh", in.annual_kwh);
  require_usable("electricity_rate", in.electricity_rate);
  require_usable("annual_therms", in.annual_therms);
  require_usable("heating_rate", in.heating_rate);

  const double electricity_price = in.annual_kwh * in.electricity_rate;
  const double heating_price = in.annual_therms * in.heating_rate;
  const double total_price = electricity_price + heating_price;
  return total_price / in.median_income * 100.0;
}

std::string_view to_string(BurdenStatus status) noexcept {
  switch (status) {
    case BurdenStatus::Overburdened: return "Overburdened";
    case BurdenStatus::BelowStateAverage: return "Below State Average";
  }
  return "";
}

BurdenReport evaluate_zip(std::string_view locale_id, const Snapshot& snapshot,
                          const RateSchedule& rates) {
  const LocaleRecord* record = snapshot.find(locale_id);
  if (record == nullptr) {
    throw Error(ErrorCode::UnknownLocale, std::string(locale_id));
  }

  BurdenReport report;
  report.locale_id = record->locale_id;
  report.state_average_pct = rates.state_average_burden_pct;
  report.energy_burden_pct = compute_energy_burden({
      .annual_kwh = record->annual_kwh_per_household,
      .electricity_rate = rates.electricity_rate,
      .annual_therms = record->annual_therms_per_household,
      .heating_rate = rates.heating_rate,
      .median_income = record->median_household_income,
  });

  if (report.energy_burden_pct > report.state_average_pct) {
    report.status = BurdenStatus::Overburdened;
    report.tips = tips_catalog();
  } else {
    report.status = BurdenStatus::BelowStateAverage;
  }
  report.message = std::string(to_string(report.status));
  return report;
}

BurdenReport evaluate_zip(std::string_view locale_id, const Snapshot& snapshot) {
  return evaluate_zip(locale_id, snapshot, snapshot.rates);
}

const std::vector<std::string>& tips_catalog() {
  static const std::vector<std::string> tips{
      "Ask your utility about income-qualified bill assistance and budget "
      "billing plans that spread heating costs across the year.",
      "Apply for the Low Income Home Energy Assistance Program (LIHEAP) and the "
      "Weatherization Assistance Program through your county agency.",
      "Schedule a free or subsidized home energy audit to find air leaks and "
      "missing insulation.",
      "Seal drafts around windows, doors and outlets with caulk and "
      "weatherstripping.",
      "Lower the thermostat 7-10\xC2\xB0"
      "F while asleep or away; a programmable or smart thermostat automates "
      "this.",
      "Replace incandescent bulbs with LEDs and unplug idle electronics or use "
      "advanced power strips.",
      "Look for ENERGY STAR rebates on efficient heat pumps, water heaters and "
      "appliances offered by state clean energy programs.",
      "Renters: ask your landlord about efficiency upgrades funded by "
      "multifamily and rental-property incentive programs.",
  };
  return tips;
}

}  // namespace eeq
