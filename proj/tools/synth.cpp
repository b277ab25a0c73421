// Writes a synthetic locale dataset in the canonical ingest layout (the
// eight CSVs plus rates.json). Real census / utility extracts are not
// redistributable, so tests and demos run on this.
//
// Every locale draws independent latents u, v ~ U(0,1) and e1..e5 ~ U(-1,1):
//
//   renter_share   = 0.15 + 0.60 u                  owner_share = 1 - renter
//   white_share    = 0.55 - 0.30 u + 0.15 e1
//   asian_share    = 0.02 + 0.18 v
//   black, other   split the remainder by a U(0.3, 0.7) fraction
//   hispanic_share = 0.10 + 0.25 u + 0.08 e4
//   low_income     = 0.15 + 0.30 u + 0.15 e2
//   high_income    = 0.40 - 0.20 u + 0.10 e3        moderate = the rest
//   median income  = 110000 - 50000 u + 20000 e5
//
// Because the shares are affine in shared latents, their population
// correlations are known in closed form, e.g.
//   corr(white, owner)     = 0.18 / sqrt(0.18 * 0.36)     ~ 0.707
//   corr(hispanic, renter) = 0.15 / sqrt(0.0881 * 0.36)   ~ 0.842
//   corr(low, renter)      = 0.18 / sqrt(0.18 * 0.36)     ~ 0.707
//   corr(high, owner)      = 0.12 / sqrt(0.08 * 0.36)     ~ 0.707
// The proxies stay well below 1 so a greedy tree still finds the planted
// drivers rather than a near-duplicate of them.
//
// Annual kWh per household (the model target):
//   planted:      5000 + 8000 renter_share + 20000 asian_share + N(0, noise)
//   renter-only:  5000 + 8000 renter_share + N(0, noise)

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <string>

#include <CLI11.hpp>

namespace {

namespace fs = std::filesystem;

// Explicit transforms over mt19937_64 so output does not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double symmetric() { return uniform(-1.0, 1.0); }
  long integer(long lo, long hi) {
    return lo + static_cast<long>(uniform() * static_cast<double>(hi - lo + 1));
  }
  double normal(double sd) {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 gen_;
};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

long round_count(double v) { return std::lround(v); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic locale dataset generator"};
  fs::path out_dir;
  int locales = 600;
  std::uint64_t seed = 20240601;
  std::string model = "planted";
  double noise_sd = 100.0;
  int first_id = 7001;
  app.add_option("--out-dir", out_dir)->required();
  app.add_option("--locales", locales)->capture_default_str()->check(CLI::Range(1, 90000));
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--model", model)
      ->capture_default_str()
      ->check(CLI::IsMember({"planted", "renter-only"}));
  app.add_option("--noise-sd", noise_sd)->capture_default_str();
  app.add_option("--first-id", first_id, "Numeric value of the first locale id")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  fs::create_directories(out_dir);
  auto open = [&](const char* name) {
    std::ofstream f(out_dir / name, std::ios::trunc);
    if (!f) {
      std::cerr << "cannot write " << (out_dir / name).string() << "\n";
      std::exit(1);
    }
    return f;
  };
  auto race = open("race.csv");
  auto hispanic = open("hispanic.csv");
  auto tenure = open("tenure.csv");
  auto year_built = open("year_built.csv");
  auto income_bins = open("income_bins.csv");
  auto quintiles = open("income_quintiles.csv");
  auto utility = open("utility_energy.csv");
  auto participation = open("participation.csv");

  race << "locale_id,name,white,black,asian,other,total_population\n";
  hispanic << "locale_id,hispanic\n";
  tenure << "locale_id,owner_occupied,renter_occupied\n";
  year_built << "locale_id,pre1960,b1960_1979,b1980_1999,b2000_plus\n";
  income_bins << "locale_id,low,moderate,high\n";
  quintiles << "locale_id,median_household_income\n";
  utility << "locale_id,annual_kwh_per_household,annual_therms_per_household\n";
  participation << "locale_id,participation_rate\n";

  Rng rng(seed);
  for (int i = 0; i < locales; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "%05d", first_id + i);

    const double u = rng.uniform();
    const double v = rng.uniform();
    const double e1 = rng.symmetric(), e2 = rng.symmetric(), e3 = rng.symmetric();
    const double e4 = rng.symmetric(), e5 = rng.symmetric();
    const double black_fraction = rng.uniform(0.3, 0.7);

    const long pop = rng.integer(5000, 60000);
    const long units = rng.integer(2000, 25000);

    const long renter = round_count((0.15 + 0.60 * u) * static_cast<double>(units));
    const long owner = units - renter;

    const double white_s = 0.55 - 0.30 * u + 0.15 * e1;
    const double asian_s = 0.02 + 0.18 * v;
    const double rest = 1.0 - white_s - asian_s;
    const long white = round_count(white_s * static_cast<double>(pop));
    const long asian = round_count(asian_s * static_cast<double>(pop));
    const long black = round_count(rest * black_fraction * static_cast<double>(pop));
    const long other = pop - white - asian - black;
    const long hisp = round_count((0.10 + 0.25 * u + 0.08 * e4) * static_cast<double>(pop));

    const double low_s = 0.15 + 0.30 * u + 0.15 * e2;
    const double high_s = 0.40 - 0.20 * u + 0.10 * e3;
    const long low = round_count(low_s * static_cast<double>(units));
    const long high = round_count(high_s * static_cast<double>(units));
    const long moderate = units - low - high;
    const long median = round_count(110000.0 - 50000.0 * u + 20000.0 * e5);

    double era[4];
    double era_total = 0.0;
    for (double& e : era) era_total += (e = rng.uniform(0.05, 1.0));
    long built[4];
    long assigned = 0;
    for (int k = 0; k < 3; ++k) {
      built[k] = round_count(era[k] / era_total * static_cast<double>(units));
      assigned += built[k];
    }
    built[3] = units - assigned;

    const double renter_share = static_cast<double>(renter) / static_cast<double>(units);
    const double asian_share = static_cast<double>(asian) / static_cast<double>(pop);
    double kwh = 5000.0 + 8000.0 * renter_share + rng.normal(noise_sd);
    if (model == "planted") kwh += 20000.0 * asian_share;
    const double therms = rng.uniform(300.0, 900.0);
    const double program_rate = rng.uniform(0.02, 0.35);

    race << id << ",Synthetic Locale " << id << "," << white << "," << black << "," << asian
         << "," << other << "," << pop << "\n";
    hispanic << id << "," << hisp << "\n";
    tenure << id << "," << owner << "," << renter << "\n";
    year_built << id << "," << built[0] << "," << built[1] << "," << built[2] << ","
               << built[3] << "\n";
    income_bins << id << "," << low << "," << moderate << "," << high << "\n";
    quintiles << id << "," << median << "\n";
    utility << id << "," << fixed(kwh, 1) << "," << fixed(therms, 1) << "\n";
    participation << id << "," << fixed(program_rate, 4) << "\n";
  }

  auto rates = open("rates.json");
  rates << "{\n  \"electricity_rate\": 0.18,\n  \"heating_rate\": 1.35,\n"
           "  \"state_average_burden_pct\": 6.0\n}\n";
  std::cout << "wrote " << locales << " locales to " << out_dir.string() << "\n";
  return 0;
}
