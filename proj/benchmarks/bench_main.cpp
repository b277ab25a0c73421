#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eeq/burden.hpp"
#include "eeq/ingest.hpp"
#include "eeq/xai.hpp"

namespace {

namespace fs = std::filesystem;

const fs::path kSynthetic = fs::path(EEQ_SOURCE_DIR) / "data/synthetic";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const eeq::Snapshot& synthetic() {
  static const eeq::Snapshot snapshot = [] {
    std::vector<eeq::RawTable> tables;
    for (auto kind : eeq::kAllTableKinds) {
      tables.push_back(eeq::parse_table(
          std::string_view(slurp(kSynthetic / std::string(eeq::canonical_filename(kind)))),
          kind));
    }
    eeq::Snapshot s;
    s.records = eeq::join_tables(tables).records;
    s.rates = eeq::load_rates(kSynthetic / "rates.json");
    return s;
  }();
  return snapshot;
}

// Random matrix with a piecewise target, n rows by d columns.
eeq::xai::FeatureMatrix random_matrix(std::size_t n, std::size_t d) {
  std::mt19937_64 rng(n * 31 + d);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::string> names;
  for (std::size_t f = 0; f < d; ++f) names.push_back("f" + std::to_string(f));
  std::vector<double> values(n * d);
  std::vector<double> target(n);
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < d; ++f) values[i * d + f] = u(rng);
    target[i] = (values[i * d] > 0.5 ? 10.0 : 0.0) + 3.0 * values[i * d + 1 % d] + u(rng);
    ids[i] = std::to_string(10000 + i);
  }
  return {std::move(names), std::move(values), std::move(target), std::move(ids)};
}

void BM_EnergyBurden(benchmark::State& state) {
  const eeq::BurdenInputs in{8000, 0.16, 700, 1.20, 60000};
  for (auto _ : state) {
    benchmark::DoNotOptimize(eeq::compute_energy_burden(in));
  }
}
BENCHMARK(BM_EnergyBurden);

void BM_EvaluateAllZips(benchmark::State& state) {
  const auto& s = synthetic();
  for (auto _ : state) {
    for (const auto& r : s.records) benchmark::DoNotOptimize(eeq::evaluate_zip(r.locale_id, s));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.records.size()));
}
BENCHMARK(BM_EvaluateAllZips);

void BM_ParseRaceTable(benchmark::State& state) {
  const std::string text = slurp(kSynthetic / "race.csv");
  for (auto _ : state) {
    benchmark::DoNotOptimize(eeq::parse_table(std::string_view(text), eeq::TableKind::Race));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_ParseRaceTable);

void BM_FitTree(benchmark::State& state) {
  const auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 16);
  const eeq::xai::TreeParams params{6, 5, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(eeq::xai::fit_tree(m, params));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FitTree)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_FitSynthetic(benchmark::State& state) {
  const auto m = eeq::xai::build_feature_matrix(synthetic());
  for (auto _ : state) benchmark::DoNotOptimize(eeq::xai::fit_tree(m, {}));
}
BENCHMARK(BM_FitSynthetic);

void BM_PccFull(benchmark::State& state) {
  const auto m = eeq::xai::build_feature_matrix(synthetic());
  const auto& names = m.feature_names();
  for (auto _ : state) benchmark::DoNotOptimize(eeq::xai::pcc_matrix(m, names, names));
}
BENCHMARK(BM_PccFull);

}  // namespace

BENCHMARK_MAIN();
