#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "eeq/error.hpp"
#include "eeq/ingest.hpp"

namespace eeq {

using nlohmann::json;

namespace {

json record_to_json(const LocaleRecord& r) {
  return json{
      {"locale_id", r.locale_id},
      {"name", r.name},
      {"race_counts",
       {{"white", r.race_counts.white},
        {"black", r.race_counts.black},
        {"asian", r.race_counts.asian},
        {"other", r.race_counts.other}}},
      {"hispanic_count", r.hispanic_count},
      {"total_population", r.total_population},
      {"owner_occupied", r.owner_occupied},
      {"renter_occupied", r.renter_occupied},
      {"year_built_counts",
       {{"pre1960", r.year_built_counts.pre1960},
        {"1960_1979", r.year_built_counts.b1960_1979},
        {"1980_1999", r.year_built_counts.b1980_1999},
        {"2000_plus", r.year_built_counts.b2000_plus}}},
      {"income_bin_counts",
       {{"low", r.income_bin_counts.low},
        {"moderate", r.income_bin_counts.moderate},
        {"high", r.income_bin_counts.high}}},
      {"median_household_income", r.median_household_income},
      {"annual_kwh_per_household", r.annual_kwh_per_household},
      {"annual_therms_per_household", r.annual_therms_per_household},
      {"program_participation_rate", r.program_participation_rate},
  };
}

// Structural problems (missing keys, wrong types) mean the document is not a
// version-1 snapshot.
[[noreturn]] void not_v1(const std::string& detail) {
  throw Error(ErrorCode::FormatVersionMismatch, "snapshot", detail);
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object()) not_v1(std::string("expected object holding '") + key + "'");
  auto it = obj.find(key);
  if (it == obj.end()) not_v1(std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number()) not_v1(std::string("field '") + key + "' is not a number");
  return v.get<double>();
}

std::string text(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_string()) not_v1(std::string("field '") + key + "' is not a string");
  return v.get<std::string>();
}

LocaleRecord record_from_json(const json& j) {
  LocaleRecord r;
  r.locale_id = text(j, "locale_id");
  r.name = text(j, "name");
  const json& race = field(j, "race_counts");
  r.race_counts = {number(race, "white"), number(race, "black"),
                   number(race, "asian"), number(race, "other")};
  r.hispanic_count = number(j, "hispanic_count");
  r.total_population = number(j, "total_population");
  r.owner_occupied = number(j, "owner_occupied");
  r.renter_occupied = number(j, "renter_occupied");
  const json& yb = field(j, "year_built_counts");
  r.year_built_counts = {number(yb, "pre1960"), number(yb, "1960_1979"),
                         number(yb, "1980_1999"), number(yb, "2000_plus")};
  const json& ib = field(j, "income_bin_counts");
  r.income_bin_counts = {number(ib, "low"), number(ib, "moderate"), number(ib, "high")};
  r.median_household_income = number(j, "median_household_income");
  r.annual_kwh_per_household = number(j, "annual_kwh_per_household");
  r.annual_therms_per_household = number(j, "annual_therms_per_household");
  r.program_participation_rate = number(j, "program_participation_rate");
  return r;
}

RateSchedule rates_from(const json& j, bool allow_default_average) {
  RateSchedule rates;
  rates.electricity_rate = number(j, "electricity_rate");
  rates.heating_rate = number(j, "heating_rate");
  if (allow_default_average && !j.contains("state_average_burden_pct")) {
    rates.state_average_burden_pct = kDefaultStateAverageBurdenPct;
  } else {
    rates.state_average_burden_pct = number(j, "state_average_burden_pct");
  }
  return rates;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, path.string(), "cannot open for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, path.string(), "read failed");
  return buffer.str();
}

}  // namespace

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

Timestamp parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  int y = 0;
  unsigned mo = 0, d = 0;
  int h = 0, mi = 0, s = 0;
  char tail = 0;
  const std::string owned(text);
  if (owned.size() != 20 ||
      std::sscanf(owned.c_str(), "%4d-%2u-%2uT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &s,
                  &tail) != 7 ||
      tail != 'Z') {
    throw Error(ErrorCode::InvalidInput, owned, "expected YYYY-MM-DDTHH:MM:SSZ");
  }
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59 || h < 0 || mi < 0 || s < 0) {
    throw Error(ErrorCode::InvalidInput, owned, "timestamp out of range");
  }
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

std::string snapshot_to_json(const Snapshot& snapshot) {
  json records = json::array();
  for (const auto& r : snapshot.records) records.push_back(record_to_json(r));
  const json doc{
      {"format_version", kSnapshotFormatVersion},
      {"created_at", format_timestamp(snapshot.created_at)},
      {"source_note", snapshot.source_note},
      {"rates",
       {{"electricity_rate", snapshot.rates.electricity_rate},
        {"heating_rate", snapshot.rates.heating_rate},
        {"state_average_burden_pct", snapshot.rates.state_average_burden_pct}}},
      {"records", std::move(records)},
  };
  return doc.dump(2) + "\n";
}

Snapshot snapshot_from_json(std::string_view text_in) {
  const json doc = json::parse(text_in.begin(), text_in.end(), nullptr, false);
  if (doc.is_discarded()) not_v1("not a JSON document");
  const json& version = field(doc, "format_version");
  if (!version.is_number_integer() || version.get<long long>() != kSnapshotFormatVersion) {
    not_v1("format_version is " + version.dump() + ", expected " +
           std::to_string(kSnapshotFormatVersion));
  }

  Snapshot s;
  try {
    s.created_at = parse_timestamp(text(doc, "created_at"));
  } catch (const Error& e) {
    not_v1(e.what());
  }
  s.source_note = text(doc, "source_note");
  s.rates = rates_from(field(doc, "rates"), false);
  const json& records = field(doc, "records");
  if (!records.is_array()) not_v1("'records' is not an array");
  s.records.reserve(records.size());
  for (const auto& r : records) s.records.push_back(record_from_json(r));
  validate(s);
  return s;
}

void save_snapshot(const Snapshot& snapshot, const std::filesystem::path& destination) {
  const std::string body = snapshot_to_json(snapshot);
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, destination.string(), "cannot open for writing");
  out << body;
  out.flush();
  if (!out) throw Error(ErrorCode::Io, destination.string(), "write failed");
}

Snapshot load_snapshot(const std::filesystem::path& source) {
  return snapshot_from_json(read_file(source));
}

RateSchedule rates_from_json(std::string_view text_in) {
  const json doc = json::parse(text_in.begin(), text_in.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::InvalidInput, "rates", "not a JSON object");
  }
  RateSchedule rates;
  try {
    rates = rates_from(doc, true);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidInput, "rates", e.what());
  }
  validate(rates);
  return rates;
}

RateSchedule load_rates(const std::filesystem::path& source) {
  return rates_from_json(read_file(source));
}

}  // namespace eeq
