#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "eeq/burden.hpp"
#include "eeq/ingest.hpp"
#include "eeq/xai.hpp"

namespace eeq::api {

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

using QueryParams = std::map<std::string, std::string, std::less<>>;

struct ServiceOptions {
  // Replaces the snapshot's state-average burden when set.
  std::optional<double> state_average_override;
  xai::TreeParams tree_params;
};

/// Read-only JSON views over one snapshot and the tree fitted to it at
/// construction. All members are const; a single instance may serve any
/// number of threads.
class AnalyticsService {
 public:
  explicit AnalyticsService(Snapshot snapshot, ServiceOptions options = {});

  ApiResponse health() const;
  ApiResponse burden(const QueryParams& query) const;
  ApiResponse feature_importance() const;
  ApiResponse pcc(const QueryParams& query) const;
  ApiResponse locales() const;

  /// Routes a request for a path under /api/. Unknown paths get a JSON 404,
  /// methods other than GET a JSON 405.
  ApiResponse handle(std::string_view method, std::string_view path,
                     const QueryParams& query) const;

  const Snapshot& snapshot() const noexcept { return snapshot_; }
  const RateSchedule& rates() const noexcept { return rates_; }
  const xai::FeatureMatrix& features() const noexcept { return features_; }
  const std::optional<xai::RegressionTree>& model() const noexcept { return model_; }

 private:
  Snapshot snapshot_;
  RateSchedule rates_;
  xai::FeatureMatrix features_;
  std::optional<xai::RegressionTree> model_;
  std::string health_body_;
  std::string locales_body_;
  std::string importance_body_;
};

/// JSON error payload {"error": code, ...extra}.
ApiResponse error_response(int status, std::string_view code,
                           std::string_view field = {}, std::string_view value = {});

struct BindAddress {
  std::string host;
  int port = 0;
};

/// "host:port" with port in [1, 65535]. Throws InvalidInput.
BindAddress parse_bind_address(std::string_view text);

struct ApiConfig {
  BindAddress bind;
  std::filesystem::path snapshot_path;
  std::optional<double> state_average_override;
  std::optional<std::filesystem::path> static_assets_dir;
};

/// HTTP/1.1 front end for an AnalyticsService. Requests are handled on a
/// worker pool; GET / serves static_assets_dir when one is given.
class HttpServer {
 public:
  HttpServer(std::shared_ptr<const AnalyticsService> service,
             std::optional<std::filesystem::path> static_assets_dir = std::nullopt);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the listening socket and returns the bound port (port 0 picks an
  /// ephemeral one). Throws Error{Io} when the address cannot be bound.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called. Requires a successful bind().
  void serve();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace eeq::api
