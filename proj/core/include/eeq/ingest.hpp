#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eeq/rates.hpp"

namespace eeq {

// Canonical simplified census / utility tables. Each kind maps to one
// source dataset:
//   Race                  B02001   white, black, asian, other, total_population
//   HispanicOrigin        B03003   hispanic
//   YearBuilt             B25034   pre1960, b1960_1979, b1980_1999, b2000_plus
//   IncomeBins            B19001   low, moderate, high
//   IncomeQuintiles       B19081   median_household_income
//   Tenure                B25003   owner_occupied, renter_occupied
//   UtilityEnergy         community-scale utility energy data
//                                  annual_kwh_per_household,
//                                  annual_therms_per_household
//   ProgramParticipation  energy efficiency program participation
//                                  participation_rate
enum class TableKind {
  Race,
  HispanicOrigin,
  YearBuilt,
  IncomeBins,
  IncomeQuintiles,
  Tenure,
  UtilityEnergy,
  ProgramParticipation,
};

inline constexpr std::array<TableKind, 8> kAllTableKinds{
    TableKind::Race,          TableKind::HispanicOrigin,
    TableKind::YearBuilt,     TableKind::IncomeBins,
    TableKind::IncomeQuintiles, TableKind::Tenure,
    TableKind::UtilityEnergy, TableKind::ProgramParticipation,
};

inline constexpr std::string_view kLocaleIdColumn = "locale_id";
inline constexpr std::string_view kNameColumn = "name";

std::string_view to_string(TableKind kind) noexcept;
/// File name used for this kind inside an ingest data directory.
std::string_view canonical_filename(TableKind kind) noexcept;
std::span<const std::string_view> required_columns(TableKind kind) noexcept;

/// Five ASCII alphanumerics (zip code or county GEOID), case-sensitive.
bool is_valid_locale_id(std::string_view id) noexcept;

using Row = std::map<std::string, double, std::less<>>;

struct RawTable {
  TableKind kind{};
  std::map<std::string, Row, std::less<>> rows;
  // Values of the optional `name` column, when the file has one.
  std::map<std::string, std::string, std::less<>> names;
};

/// Parses one canonical CSV table. Column order is irrelevant; columns other
/// than `locale_id`, `name` and the kind's required set are ignored.
/// Throws Error with MissingColumn, DuplicateLocale, NonNumericCell,
/// NegativeValue, EmptyTable, InvalidLocaleId or MalformedCsv.
RawTable parse_table(std::istream& input, TableKind kind);
RawTable parse_table(std::string_view text, TableKind kind);

struct RaceCounts {
  double white = 0, black = 0, asian = 0, other = 0;
  bool operator==(const RaceCounts&) const = default;
};

struct YearBuiltCounts {
  double pre1960 = 0, b1960_1979 = 0, b1980_1999 = 0, b2000_plus = 0;
  bool operator==(const YearBuiltCounts&) const = default;
};

struct IncomeBinCounts {
  double low = 0, moderate = 0, high = 0;
  bool operator==(const IncomeBinCounts&) const = default;
};

/// One locale's demographics, housing stock, income and per-household
/// energy use.
struct LocaleRecord {
  std::string locale_id;
  std::string name;
  RaceCounts race_counts;
  double hispanic_count = 0;
  double total_population = 0;
  double owner_occupied = 0;
  double renter_occupied = 0;
  YearBuiltCounts year_built_counts;
  IncomeBinCounts income_bin_counts;
  double median_household_income = 0;      // USD / year
  double annual_kwh_per_household = 0;     // kWh / year
  double annual_therms_per_household = 0;  // therms / year
  double program_participation_rate = 0;   // fraction in [0, 1]

  bool operator==(const LocaleRecord&) const = default;
};

/// Throws Error{IntegrityViolation} (subject "<locale_id>.<field>") when a
/// record invariant does not hold.
void validate(const LocaleRecord& record);

struct JoinResult {
  std::vector<LocaleRecord> records;  // sorted by locale_id
  std::size_t dropped = 0;            // |union| - |intersection| of ids
};

/// Inner join of one table per kind. Throws MissingTableKind,
/// NoCommonLocales, or IntegrityViolation for a joined record that breaks a
/// LocaleRecord invariant. Passing two tables of the same kind is
/// InvalidInput.
JoinResult join_tables(std::span<const RawTable> tables);

using Timestamp = std::chrono::sys_seconds;

struct Snapshot {
  std::vector<LocaleRecord> records;  // sorted, unique locale_id
  RateSchedule rates;
  Timestamp created_at{};
  std::string source_note;

  bool operator==(const Snapshot&) const = default;

  /// nullptr when absent.
  const LocaleRecord* find(std::string_view locale_id) const noexcept;
};

/// Checks every Snapshot and LocaleRecord invariant; throws
/// IntegrityViolation.
void validate(const Snapshot& snapshot);

/// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_timestamp(Timestamp t);
/// Inverse of format_timestamp; throws InvalidInput.
Timestamp parse_timestamp(std::string_view text);

inline constexpr int kSnapshotFormatVersion = 1;

std::string snapshot_to_json(const Snapshot& snapshot);
/// Throws FormatVersionMismatch for anything that is not a well-formed
/// version-1 document, IntegrityViolation when a record breaks an invariant.
Snapshot snapshot_from_json(std::string_view text);

void save_snapshot(const Snapshot& snapshot,
                   const std::filesystem::path& destination);
Snapshot load_snapshot(const std::filesystem::path& source);

/// Rates file: {electricity_rate, heating_rate, state_average_burden_pct}.
/// The state average may be omitted and defaults to 6.0.
RateSchedule rates_from_json(std::string_view text);
RateSchedule load_rates(const std::filesystem::path& source);

}  // namespace eeq
