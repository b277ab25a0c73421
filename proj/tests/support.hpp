#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "eeq/ingest.hpp"

namespace eeq::test {

namespace fs = std::filesystem;

inline fs::path source_dir() { return fs::path(EEQ_SOURCE_DIR); }
inline fs::path fixture(const std::string& rel) { return source_dir() / "tests/fixtures" / rel; }
inline fs::path synthetic_dir() { return source_dir() / "data/synthetic"; }

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << body;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = fs::temp_directory_path() /
            ("eeq-" + tag + "-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// A record satisfying every LocaleRecord invariant, with non-integer values
/// so that serialization is exercised at full precision.
inline LocaleRecord random_record(std::mt19937_64& rng, std::string id) {
  LocaleRecord r;
  r.locale_id = id;
  r.name = "Locale " + id + (uniform_int(rng, 0, 1) ? ", \"quoted\"" : "");
  r.total_population = uniform(rng, 100.0, 80000.0);
  const double pop = r.total_population;
  r.race_counts = {uniform(rng, 0, pop), uniform(rng, 0, pop), uniform(rng, 0, pop),
                   uniform(rng, 0, pop)};
  r.hispanic_count = uniform(rng, 0, pop);
  r.owner_occupied = uniform(rng, 1.0, 20000.0);
  r.renter_occupied = uniform(rng, 0.0, 20000.0);
  r.year_built_counts = {uniform(rng, 1, 5000), uniform(rng, 0, 5000), uniform(rng, 0, 5000),
                         uniform(rng, 0, 5000)};
  r.income_bin_counts = {uniform(rng, 1, 5000), uniform(rng, 0, 5000), uniform(rng, 0, 5000)};
  r.median_household_income = uniform(rng, 15000.0, 250000.0);
  r.annual_kwh_per_household = uniform(rng, 0.0, 20000.0);
  r.annual_therms_per_household = uniform(rng, 0.0, 1500.0);
  r.program_participation_rate = uniform(rng, 0.0, 1.0);
  return r;
}

inline std::vector<std::string> random_ids(std::mt19937_64& rng, std::size_t count) {
  std::set<std::string> ids;
  while (ids.size() < count) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%05d", uniform_int(rng, 0, 99999));
    ids.insert(buf);
  }
  return {ids.begin(), ids.end()};
}

/// Parses and joins the eight canonical CSVs in `dir` with its rates.json.
inline Snapshot load_dataset(const fs::path& dir) {
  std::vector<RawTable> tables;
  for (auto kind : kAllTableKinds) {
    tables.push_back(parse_table(slurp(dir / std::string(canonical_filename(kind))), kind));
  }
  Snapshot s;
  s.records = join_tables(tables).records;
  s.rates = load_rates(dir / "rates.json");
  s.created_at = std::chrono::sys_seconds{std::chrono::seconds{1'700'000'000}};
  s.source_note = dir.filename().string();
  return s;
}

inline Snapshot random_snapshot(std::mt19937_64& rng, std::size_t locales) {
  Snapshot s;
  for (const auto& id : random_ids(rng, locales)) s.records.push_back(random_record(rng, id));
  s.rates = {uniform(rng, 0.05, 0.45), uniform(rng, 0.5, 3.0), uniform(rng, 1.0, 12.0)};
  s.created_at = std::chrono::sys_seconds{
      std::chrono::seconds{uniform_int(rng, 0, 2'000'000'000)}};
  s.source_note = "random snapshot " + std::to_string(locales);
  return s;
}

}  // namespace eeq::test
