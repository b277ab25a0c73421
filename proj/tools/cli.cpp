#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "eeq/burden.hpp"
#include "eeq/error.hpp"
#include "eeq/ingest.hpp"
#include "eeq/serialize.hpp"
#include "eeq/service.hpp"
#include "eeq/xai.hpp"

namespace eeq::cli {

namespace fs = std::filesystem;

namespace {

struct IngestArgs {
  fs::path data_dir;
  fs::path rates_file;
  fs::path out;
  std::string source_note;
};

struct AnalyzeArgs {
  fs::path snapshot;
  fs::path out_dir;
  xai::TreeParams params;
};

struct BurdenArgs {
  fs::path snapshot;
  std::string zip;
};

struct PccArgs {
  fs::path snapshot;
  std::string group_a;
  std::string group_b;
  fs::path out;
};

struct ServeArgs {
  fs::path snapshot;
  std::string bind = "127.0.0.1:8080";
  std::optional<double> state_average;
  std::optional<fs::path> assets;
};

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::Io, path.string(), "cannot open for writing");
  f << body;
  f.flush();
  if (!f) throw Error(ErrorCode::Io, path.string(), "write failed");
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, path.string(), "cannot open for reading");
  std::ostringstream buffer;
  buffer << f.rdbuf();
  return buffer.str();
}

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!text.empty() && text.back() == ',') out.emplace_back();
  return out;
}

std::string percent(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f%%", value);
  return buf;
}

int cmd_ingest(const IngestArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<RawTable> tables;
  for (TableKind kind : kAllTableKinds) {
    const fs::path file = a.data_dir / canonical_filename(kind);
    if (!fs::is_regular_file(file)) {
      err << "error: missing input file " << file.string() << " ("
          << canonical_filename(kind) << ")\n";
      return kDataError;
    }
    try {
      tables.push_back(parse_table(std::string_view(read_file(file)), kind));
    } catch (const Error& e) {
      err << "error: " << canonical_filename(kind) << ": " << e.what() << "\n";
      return kDataError;
    }
  }

  RateSchedule rates;
  try {
    rates = load_rates(a.rates_file);
  } catch (const Error& e) {
    err << "error: " << a.rates_file.string() << ": invariant violation: " << e.what()
        << "\n";
    return kDataError;
  }

  JoinResult joined;
  try {
    joined = join_tables(tables);
  } catch (const Error& e) {
    err << "error: join: " << e.what() << "\n";
    return kDataError;
  }

  Snapshot snapshot;
  snapshot.records = std::move(joined.records);
  snapshot.rates = rates;
  snapshot.created_at =
      std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  snapshot.source_note =
      a.source_note.empty() ? "ingested from " + a.data_dir.string() : a.source_note;
  save_snapshot(snapshot, a.out);
  out << "joined=" << snapshot.records.size() << " dropped=" << joined.dropped << "\n";
  return kOk;
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream&) {
  const Snapshot snapshot = load_snapshot(a.snapshot);
  const xai::FeatureMatrix m = xai::build_feature_matrix(snapshot);
  const xai::RegressionTree tree = xai::fit_tree(m, a.params);
  const auto importance = xai::feature_importance(tree, m.feature_names());
  const auto predicted = xai::predict_all(tree, m);

  xai::ModelMetrics metrics;
  if (m.rows() >= 2) metrics = xai::evaluate(predicted, m.target());

  fs::create_directories(a.out_dir);
  write_file(a.out_dir / "importance.json", xai::importance_to_json(importance));
  write_file(a.out_dir / "metrics.json", xai::metrics_to_json(metrics, m.rows()));
  write_file(a.out_dir / "tree.json", xai::tree_to_json(tree, m.feature_names()));

  out << "locales=" << m.rows() << " splits=" << tree.split_count()
      << " depth=" << tree.depth() << " r_squared="
      << (metrics.r_squared ? std::to_string(*metrics.r_squared) : std::string("null"))
      << " rmse=" << metrics.rmse << "\n";
  for (std::size_t i = 0; i < importance.size() && i < 5; ++i) {
    out << "  " << importance[i].feature << " " << importance[i].weight << "\n";
  }
  return kOk;
}

int cmd_burden(const BurdenArgs& a, std::ostream& out, std::ostream& err) {
  const Snapshot snapshot = load_snapshot(a.snapshot);
  if (!is_valid_locale_id(a.zip)) {
    err << "error: invalid zip '" << a.zip << "' (expected 5 alphanumeric characters)\n";
    return kDataError;
  }
  BurdenReport report;
  try {
    report = evaluate_zip(a.zip, snapshot);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnknownLocale) throw;
    err << "error: zip " << a.zip << " not found in snapshot\n";
    return kNotFound;
  }
  out << percent(report.energy_burden_pct) << "\n" << report.message << "\n";
  if (report.tips) {
    out << "Tips to lower energy burden:\n";
    for (const auto& tip : *report.tips) out << "- " << tip << "\n";
  }
  return kOk;
}

int cmd_pcc(const PccArgs& a, std::ostream& out, std::ostream& err) {
  const Snapshot snapshot = load_snapshot(a.snapshot);
  const xai::FeatureMatrix m = xai::build_feature_matrix(snapshot);
  const auto names_a = xai::expand_feature_groups(split_csv_list(a.group_a));
  const auto names_b = xai::expand_feature_groups(split_csv_list(a.group_b));
  xai::PccMatrix matrix;
  try {
    matrix = xai::pcc_matrix(m, names_a, names_b);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnknownFeature) throw;
    err << "error: unknown feature '" << e.subject() << "'\n";
    return kDataError;
  }
  write_file(a.out, xai::pcc_to_csv(matrix));
  out << "wrote " << matrix.row_labels.size() << "x" << matrix.col_labels.size()
      << " matrix to " << a.out.string() << "\n";
  return kOk;
}

std::atomic<bool> g_stop_requested{false};

extern "C" void on_stop_signal(int) { g_stop_requested.store(true); }

int cmd_serve(const ServeArgs& a, std::ostream& out, std::ostream& err) {
  if (a.snapshot.empty()) {
    err << "error: --snapshot (or EEQ_SNAPSHOT) is required\n";
    return kDataError;
  }
  api::BindAddress bind;
  try {
    bind = api::parse_bind_address(a.bind);
  } catch (const Error& e) {
    err << "error: --bind: " << e.what() << "\n";
    return kDataError;
  }

  api::ServiceOptions options;
  options.state_average_override = a.state_average;
  auto service = std::make_shared<const api::AnalyticsService>(load_snapshot(a.snapshot),
                                                               options);
  api::HttpServer server(service, a.assets);
  int port = 0;
  try {
    port = server.bind(bind.host, bind.port);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }

  g_stop_requested.store(false);
  auto old_int = std::signal(SIGINT, on_stop_signal);
  auto old_term = std::signal(SIGTERM, on_stop_signal);
  std::atomic<bool> finished{false};
  std::thread watcher([&] {
    while (!g_stop_requested.load() && !finished.load()) {
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    server.stop();
  });

  out << "serving " << service->snapshot().records.size() << " locales on http://"
      << bind.host << ":" << port << std::endl;
  server.serve();
  finished.store(true);
  watcher.join();
  std::signal(SIGINT, old_int);
  std::signal(SIGTERM, old_term);
  out << "shutdown complete" << std::endl;
  return kOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy equity analytics: burden calculator, explainable tree model, "
               "correlation matrices"};
  app.name("eeq");
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Join the canonical CSV tables into a snapshot");
  ingest_cmd->add_option("--data-dir", ingest.data_dir, "Directory holding the 8 canonical CSVs")
      ->required();
  ingest_cmd->add_option("--rates-file", ingest.rates_file, "JSON rate schedule")->required();
  ingest_cmd->add_option("--out", ingest.out, "Snapshot file to write")->required();
  ingest_cmd->add_option("--source-note", ingest.source_note, "Provenance note stored in the snapshot");

  AnalyzeArgs analyze;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Fit the regression tree; write importance, metrics, tree");
  analyze_cmd->add_option("--snapshot", analyze.snapshot)->required();
  analyze_cmd->add_option("--out-dir", analyze.out_dir)->required();
  analyze_cmd->add_option("--max-depth", analyze.params.max_depth)->capture_default_str();
  analyze_cmd->add_option("--min-samples-leaf", analyze.params.min_samples_leaf)
      ->capture_default_str();
  analyze_cmd->add_option("--min-impurity-decrease", analyze.params.min_impurity_decrease)
      ->capture_default_str();

  BurdenArgs burden;
  auto* burden_cmd = app.add_subcommand("burden", "Energy burden for one zip code");
  burden_cmd->add_option("--snapshot", burden.snapshot)->required();
  burden_cmd->add_option("--zip", burden.zip)->required();

  PccArgs pcc;
  auto* pcc_cmd = app.add_subcommand("pcc", "Pearson correlation matrix between two feature lists");
  pcc_cmd->add_option("--snapshot", pcc.snapshot)->required();
  pcc_cmd->add_option("--group-a", pcc.group_a,
                      "Comma-separated features or groups (race, tenure, income, year_built)")
      ->required();
  pcc_cmd->add_option("--group-b", pcc.group_b)->required();
  pcc_cmd->add_option("--out", pcc.out, "CSV file to write")->required();

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the JSON API (and portal assets)");
  serve_cmd->add_option("--snapshot", serve.snapshot)->envname("EEQ_SNAPSHOT");
  serve_cmd->add_option("--bind", serve.bind, "host:port")->capture_default_str();
  serve_cmd->add_option("--state-average", serve.state_average,
                        "Override the snapshot's state-average burden (percent)");
  serve_cmd->add_option("--assets", serve.assets, "Directory of portal static assets");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kDataError;
  }

  try {
    if (*ingest_cmd) return cmd_ingest(ingest, out, err);
    if (*analyze_cmd) return cmd_analyze(analyze, out, err);
    if (*burden_cmd) return cmd_burden(burden, out, err);
    if (*pcc_cmd) return cmd_pcc(pcc, out, err);
    if (*serve_cmd) return cmd_serve(serve, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kDataError;
}

}  // namespace eeq::cli
