#pragma once

namespace eeq {

inline constexpr double kDefaultStateAverageBurdenPct = 6.0;

/// Utility prices applied to every locale, plus the state-average burden
/// threshold (percent) above which a locale is reported as overburdened.
struct RateSchedule {
  double electricity_rate = 0.0;  // USD per kWh
  double heating_rate = 0.0;      // USD per therm
  double state_average_burden_pct = kDefaultStateAverageBurdenPct;

  bool operator==(const RateSchedule&) const = default;
};

/// Throws Error{InvalidInput} naming the field when any value is negative or
/// non-finite.
void validate(const RateSchedule& rates);

}  // namespace eeq
