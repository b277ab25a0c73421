#include <doctest.h>

#include <cmath>
#include <random>

#include "eeq/burden.hpp"
#include "eeq/error.hpp"
#include "oracles/burden_oracle.hpp"
#include "support.hpp"

using namespace eeq;

namespace {

Snapshot one_locale(double kwh, double therms, double income, RateSchedule rates) {
  Snapshot s;
  std::mt19937_64 rng(1);
  LocaleRecord r = test::random_record(rng, "07043");
  r.annual_kwh_per_household = kwh;
  r.annual_therms_per_household = therms;
  r.median_household_income = income;
  s.records.push_back(r);
  s.rates = rates;
  return s;
}

}  // namespace

TEST_CASE("compute_energy_burden worked examples") {
  CHECK(compute_energy_burden({0, 0.16, 0, 1.20, 60000}) == 0.0);

  const double mixed = compute_energy_burden({8000, 0.16, 700, 1.20, 60000});
  CHECK(mixed == oracle::energy_burden_pct(8000, 0.16, 700, 1.20, 60000));
  CHECK(mixed == doctest::Approx(2120.0 / 600.0).epsilon(1e-14));

  const double high = compute_energy_burden({10000, 0.20, 1000, 1.50, 35000});
  CHECK(high == oracle::energy_burden_pct(10000, 0.20, 1000, 1.50, 35000));
  CHECK(high == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("compute_energy_burden input validation") {
  CHECK_THROWS_AS(compute_energy_burden({1000, 0.2, 10, 1.0, 0.0}), Error);
  try {
    compute_energy_burden({1000, 0.2, 10, 1.0, -5.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveIncome);
  }
  try {
    compute_energy_burden({-1, 0.2, 10, 1.0, 50000});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInput);
    CHECK(e.subject() == "annual_kwh");
  }
  CHECK_THROWS_AS(compute_energy_burden({1, NAN, 10, 1.0, 50000}), Error);
}

TEST_CASE("burden is linear in usage and inverse in income") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 200; ++i) {
    const BurdenInputs in{test::uniform(rng, 0, 20000), test::uniform(rng, 0.05, 0.5),
                          test::uniform(rng, 0, 1500), test::uniform(rng, 0.3, 3.0),
                          test::uniform(rng, 10000, 200000)};
    const double eb = compute_energy_burden(in);

    BurdenInputs doubled_income = in;
    doubled_income.median_income *= 2.0;
    CHECK(compute_energy_burden(doubled_income) == eb / 2.0);

    BurdenInputs doubled_use = in;
    doubled_use.annual_kwh *= 2.0;
    doubled_use.annual_therms *= 2.0;
    CHECK(compute_energy_burden(doubled_use) == doctest::Approx(2.0 * eb).epsilon(1e-12));

    BurdenInputs elec = in, heat = in;
    elec.annual_therms = 0.0;
    heat.annual_kwh = 0.0;
    const double parts = compute_energy_burden(elec) + compute_energy_burden(heat);
    CHECK(std::abs(parts - eb) <= 1e-12 * std::max(1.0, std::abs(eb)));
  }
}

TEST_CASE("evaluate_zip follows the calculator branches") {
  const RateSchedule rates{0.20, 1.50, 6.0};

  SUBCASE("overburdened") {
    const auto report = evaluate_zip("07043", one_locale(10000, 1000, 35000, rates));
    CHECK(report.locale_id == "07043");
    CHECK(report.energy_burden_pct == oracle::energy_burden_pct(10000, 0.20, 1000, 1.50, 35000));
    CHECK(report.state_average_pct == 6.0);
    CHECK(report.status == BurdenStatus::Overburdened);
    CHECK(report.message == "Overburdened");
    REQUIRE(report.tips.has_value());
    CHECK(*report.tips == tips_catalog());
  }
  SUBCASE("below average") {
    const RateSchedule cheap{0.16, 1.20, 6.0};
    const auto report = evaluate_zip("07043", one_locale(8000, 700, 60000, cheap));
    CHECK(report.energy_burden_pct == doctest::Approx(3.5333333333333).epsilon(1e-12));
    CHECK(report.status == BurdenStatus::BelowStateAverage);
    CHECK(report.message == "Below State Average");
    CHECK_FALSE(report.tips.has_value());
  }
  SUBCASE("burden equal to the state average is not overburdened") {
    const double eb = compute_energy_burden({10000, 0.20, 1000, 1.50, 35000});
    const auto report =
        evaluate_zip("07043", one_locale(10000, 1000, 35000, {0.20, 1.50, eb}));
    CHECK(report.energy_burden_pct == report.state_average_pct);
    CHECK(report.status == BurdenStatus::BelowStateAverage);
    CHECK_FALSE(report.tips.has_value());
  }
  SUBCASE("explicit rates override the snapshot's") {
    const auto s = one_locale(10000, 1000, 35000, rates);
    CHECK(evaluate_zip("07043", s, {0.20, 1.50, 12.0}).status == BurdenStatus::BelowStateAverage);
  }
  SUBCASE("unknown locale") {
    try {
      evaluate_zip("00000", one_locale(1, 1, 1, rates));
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownLocale);
      CHECK(e.subject() == "00000");
    }
  }
}

TEST_CASE("tips catalog is fixed and non-empty") {
  const auto& a = tips_catalog();
  const auto b = tips_catalog();
  CHECK(a.size() >= 5);
  CHECK(a == b);
  for (const auto& tip : a) CHECK_FALSE(tip.empty());
}
