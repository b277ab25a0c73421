#include "eeq/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <iterator>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "eeq/error.hpp"

namespace eeq {

namespace {

constexpr std::array<std::string_view, 5> kRaceColumns{
    "white", "black", "asian", "other", "total_population"};
constexpr std::array<std::string_view, 1> kHispanicColumns{"hispanic"};
constexpr std::array<std::string_view, 4> kYearBuiltColumns{
    "pre1960", "b1960_1979", "b1980_1999", "b2000_plus"};
constexpr std::array<std::string_view, 3> kIncomeBinColumns{"low", "moderate",
                                                            "high"};
constexpr std::array<std::string_view, 1> kQuintileColumns{
    "median_household_income"};
constexpr std::array<std::string_view, 2> kTenureColumns{"owner_occupied",
                                                         "renter_occupied"};
constexpr std::array<std::string_view, 2> kUtilityColumns{
    "annual_kwh_per_household", "annual_therms_per_household"};
constexpr std::array<std::string_view, 1> kParticipationColumns{
    "participation_rate"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string where(std::size_t line, std::string_view locale) {
  return "line " + std::to_string(line) + " (locale " + std::string(locale) + ")";
}

double parse_cell(std::string_view cell, std::size_t line,
                  std::string_view locale, std::string_view column) {
  const std::string_view text = trim(cell);
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw Error(ErrorCode::NonNumericCell, std::string(column),
                where(line, locale) + ": '" + std::string(text) + "'");
  }
  if (value < 0.0) {
    throw Error(ErrorCode::NegativeValue, std::string(column),
                where(line, locale) + ": " + std::string(text));
  }
  return value + 0.0;  // folds -0.0 to +0.0
}

}  // namespace

std::string_view to_string(TableKind kind) noexcept {
  switch (kind) {
    case TableKind::Race: return "Race";
    case TableKind::HispanicOrigin: return "HispanicOrigin";
    case TableKind::YearBuilt: return "YearBuilt";
    case TableKind::IncomeBins: return "IncomeBins";
    case TableKind::IncomeQuintiles: return "IncomeQuintiles";
    case TableKind::Tenure: return "Tenure";
    case TableKind::UtilityEnergy: return "UtilityEnergy";
    case TableKind::ProgramParticipation: return "ProgramParticipation";
  }
  return "Unknown";
}

std::string_view canonical_filename(TableKind kind) noexcept {
  switch (kind) {
    case TableKind::Race: return "race.csv";
    case TableKind::HispanicOrigin: return "hispanic.csv";
    case TableKind::YearBuilt: return "year_built.csv";
    case TableKind::IncomeBins: return "income_bins.csv";
    case TableKind::IncomeQuintiles: return "income_quintiles.csv";
    case TableKind::Tenure: return "tenure.csv";
    case TableKind::UtilityEnergy: return "utility_energy.csv";
    case TableKind::ProgramParticipation: return "participation.csv";
  }
  return "";
}

std::span<const std::string_view> required_columns(TableKind kind) noexcept {
  switch (kind) {
    case TableKind::Race: return kRaceColumns;
    case TableKind::HispanicOrigin: return kHispanicColumns;
    case TableKind::YearBuilt: return kYearBuiltColumns;
    case TableKind::IncomeBins: return kIncomeBinColumns;
    case TableKind::IncomeQuintiles: return kQuintileColumns;
    case TableKind::Tenure: return kTenureColumns;
    case TableKind::UtilityEnergy: return kUtilityColumns;
    case TableKind::ProgramParticipation: return kParticipationColumns;
  }
  return {};
}

bool is_valid_locale_id(std::string_view id) noexcept {
  return id.size() == 5 && std::all_of(id.begin(), id.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
                  (c >= 'A' && c <= 'Z');
         });
}

RawTable parse_table(std::string_view text, TableKind kind) {
  const auto records = detail::read_csv(text);
  if (records.empty()) {
    throw Error(ErrorCode::EmptyTable, std::string(to_string(kind)),
                "no header row");
  }

  const auto& header = records.front();
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    std::string name(trim(header.fields[i]));
    if (!index.emplace(name, i).second) {
      throw Error(ErrorCode::MalformedCsv, name, "duplicate header column");
    }
  }

  auto column_index = [&](std::string_view name) {
    auto it = index.find(name);
    if (it == index.end()) {
      throw Error(ErrorCode::MissingColumn, std::string(name),
                  std::string(to_string(kind)) + " table");
    }
    return it->second;
  };
  const std::size_t id_col = column_index(kLocaleIdColumn);
  std::vector<std::pair<std::string_view, std::size_t>> value_cols;
  for (std::string_view col : required_columns(kind)) {
    value_cols.emplace_back(col, column_index(col));
  }
  const auto name_it = index.find(kNameColumn);

  if (records.size() == 1) {
    throw Error(ErrorCode::EmptyTable, std::string(to_string(kind)),
                "header row only");
  }

  RawTable table;
  table.kind = kind;
  for (auto rec = std::next(records.begin()); rec != records.end(); ++rec) {
    if (rec->fields.size() != header.fields.size()) {
      throw Error(ErrorCode::MalformedCsv, "line " + std::to_string(rec->line),
                  "expected " + std::to_string(header.fields.size()) +
                      " fields, found " + std::to_string(rec->fields.size()));
    }
    std::string id(trim(rec->fields[id_col]));
    if (!is_valid_locale_id(id)) {
      throw Error(ErrorCode::InvalidLocaleId, id,
                  "line " + std::to_string(rec->line));
    }
    if (table.rows.contains(id)) {
      throw Error(ErrorCode::DuplicateLocale, id,
                  "line " + std::to_string(rec->line));
    }
    Row row;
    for (const auto& [col, idx] : value_cols) {
      row.emplace(std::string(col), parse_cell(rec->fields[idx], rec->line, id, col));
    }
    if (name_it != index.end()) {
      std::string name(trim(rec->fields[name_it->second]));
      if (!name.empty()) table.names.emplace(id, std::move(name));
    }
    table.rows.emplace(std::move(id), std::move(row));
  }
  return table;
}

RawTable parse_table(std::istream& input, TableKind kind) {
  std::ostringstream buffer;
  buffer << input.rdbuf();
  return parse_table(std::string_view(buffer.str()), kind);
}

void validate(const LocaleRecord& r) {
  auto fail = [&](std::string_view field, const std::string& detail) {
    throw Error(ErrorCode::IntegrityViolation, r.locale_id + "." + std::string(field),
                detail);
  };
  if (!is_valid_locale_id(r.locale_id)) fail("locale_id", "not a 5-character id");

  const std::pair<std::string_view, double> nonneg[] = {
      {"race_counts.white", r.race_counts.white},
      {"race_counts.black", r.race_counts.black},
      {"race_counts.asian", r.race_counts.asian},
      {"race_counts.other", r.race_counts.other},
      {"hispanic_count", r.hispanic_count},
      {"total_population", r.total_population},
      {"owner_occupied", r.owner_occupied},
      {"renter_occupied", r.renter_occupied},
      {"year_built_counts.pre1960", r.year_built_counts.pre1960},
      {"year_built_counts.1960_1979", r.year_built_counts.b1960_1979},
      {"year_built_counts.1980_1999", r.year_built_counts.b1980_1999},
      {"year_built_counts.2000_plus", r.year_built_counts.b2000_plus},
      {"income_bin_counts.low", r.income_bin_counts.low},
      {"income_bin_counts.moderate", r.income_bin_counts.moderate},
      {"income_bin_counts.high", r.income_bin_counts.high},
      {"median_household_income", r.median_household_income},
      {"annual_kwh_per_household", r.annual_kwh_per_household},
      {"annual_therms_per_household", r.annual_therms_per_household},
      {"program_participation_rate", r.program_participation_rate},
  };
  for (const auto& [field, value] : nonneg) {
    if (!std::isfinite(value)) fail(field, "not finite");
    if (value < 0.0) fail(field, "negative");
  }

  if (!(r.owner_occupied + r.renter_occupied > 0.0)) {
    fail("occupied_units", "owner_occupied + renter_occupied must be > 0");
  }
  if (!(r.total_population > 0.0)) fail("total_population", "must be > 0");
  for (double count : {r.race_counts.white, r.race_counts.black,
                       r.race_counts.asian, r.race_counts.other,
                       r.hispanic_count}) {
    if (count > r.total_population) {
      fail("total_population", "smaller than a group count");
    }
  }
  const auto& yb = r.year_built_counts;
  if (!(yb.pre1960 + yb.b1960_1979 + yb.b1980_1999 + yb.b2000_plus > 0.0)) {
    fail("year_built_counts", "all bins are zero");
  }
  const auto& ib = r.income_bin_counts;
  if (!(ib.low + ib.moderate + ib.high > 0.0)) {
    fail("income_bin_counts", "all bins are zero");
  }
  if (!(r.median_household_income > 0.0)) {
    fail("median_household_income", "must be > 0");
  }
  if (r.program_participation_rate > 1.0) {
    fail("program_participation_rate", "must be within [0, 1]");
  }
}

JoinResult join_tables(std::span<const RawTable> tables) {
  std::map<TableKind, const RawTable*> by_kind;
  for (const auto& t : tables) {
    if (!by_kind.emplace(t.kind, &t).second) {
      throw Error(ErrorCode::InvalidInput, std::string(to_string(t.kind)),
                  "more than one table of this kind");
    }
  }
  for (TableKind kind : kAllTableKinds) {
    if (!by_kind.contains(kind)) {
      throw Error(ErrorCode::MissingTableKind, std::string(to_string(kind)));
    }
  }

  std::set<std::string, std::less<>> all_ids;
  for (const auto& [kind, table] : by_kind) {
    for (const auto& [id, row] : table->rows) all_ids.insert(id);
  }

  JoinResult result;
  for (const auto& id : all_ids) {
    const bool everywhere = std::all_of(by_kind.begin(), by_kind.end(), [&](const auto& kv) {
      return kv.second->rows.contains(id);
    });
    if (!everywhere) {
      ++result.dropped;
      continue;
    }
    auto cell = [&](TableKind kind, std::string_view column) {
      return by_kind.at(kind)->rows.find(id)->second.find(column)->second;
    };

    LocaleRecord r;
    r.locale_id = id;
    r.name = id;
    for (TableKind kind : kAllTableKinds) {
      const auto& names = by_kind.at(kind)->names;
      if (auto it = names.find(id); it != names.end()) {
        r.name = it->second;
        break;
      }
    }
    r.race_counts = {cell(TableKind::Race, "white"), cell(TableKind::Race, "black"),
                     cell(TableKind::Race, "asian"), cell(TableKind::Race, "other")};
    r.total_population = cell(TableKind::Race, "total_population");
    r.hispanic_count = cell(TableKind::HispanicOrigin, "hispanic");
    r.owner_occupied = cell(TableKind::Tenure, "owner_occupied");
    r.renter_occupied = cell(TableKind::Tenure, "renter_occupied");
    r.year_built_counts = {cell(TableKind::YearBuilt, "pre1960"),
                           cell(TableKind::YearBuilt, "b1960_1979"),
                           cell(TableKind::YearBuilt, "b1980_1999"),
                           cell(TableKind::YearBuilt, "b2000_plus")};
    r.income_bin_counts = {cell(TableKind::IncomeBins, "low"),
                           cell(TableKind::IncomeBins, "moderate"),
                           cell(TableKind::IncomeBins, "high")};
    r.median_household_income =
        cell(TableKind::IncomeQuintiles, "median_household_income");
    r.annual_kwh_per_household =
        cell(TableKind::UtilityEnergy, "annual_kwh_per_household");
    r.annual_therms_per_household =
        cell(TableKind::UtilityEnergy, "annual_therms_per_household");
    r.program_participation_rate =
        cell(TableKind::ProgramParticipation, "participation_rate");
    validate(r);
    result.records.push_back(std::move(r));
  }

  if (result.records.empty()) throw Error(ErrorCode::NoCommonLocales, "");
  return result;
}

const LocaleRecord* Snapshot::find(std::string_view locale_id) const noexcept {
  auto it = std::lower_bound(
      records.begin(), records.end(), locale_id,
      [](const LocaleRecord& r, std::string_view id) { return r.locale_id < id; });
  if (it == records.end() || it->locale_id != locale_id) return nullptr;
  return &*it;
}

void validate(const Snapshot& snapshot) {
  if (snapshot.records.empty()) {
    throw Error(ErrorCode::IntegrityViolation, "records", "snapshot is empty");
  }
  for (std::size_t i = 0; i < snapshot.records.size(); ++i) {
    validate(snapshot.records[i]);
    if (i > 0 && !(snapshot.records[i - 1].locale_id < snapshot.records[i].locale_id)) {
      throw Error(ErrorCode::IntegrityViolation, snapshot.records[i].locale_id,
                  "records not strictly sorted by locale_id");
    }
  }
  try {
    validate(snapshot.rates);
  } catch (const Error& e) {
    throw Error(ErrorCode::IntegrityViolation, e.subject(), e.what());
  }
}

}  // namespace eeq
