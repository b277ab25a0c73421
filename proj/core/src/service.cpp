#include "eeq/service.hpp"

#include <charconv>

#include <json.hpp>

#include "eeq/error.hpp"
#include "eeq/serialize.hpp"

namespace eeq::api {

using nlohmann::json;

namespace {

RateSchedule effective_rates(const Snapshot& s, const ServiceOptions& options) {
  RateSchedule rates = s.rates;
  if (options.state_average_override) {
    rates.state_average_burden_pct = *options.state_average_override;
  }
  validate(rates);
  return rates;
}

std::optional<xai::RegressionTree> fit_model(const xai::FeatureMatrix& m,
                                             const xai::TreeParams& params) {
  try {
    return xai::fit_tree(m, params);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::vector<std::string> split_names(std::string_view csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = csv.find(',', start);
    out.emplace_back(csv.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

ApiResponse ok(std::string body) { return {200, std::move(body)}; }

}  // namespace

ApiResponse error_response(int status, std::string_view code, std::string_view field,
                           std::string_view value) {
  json doc{{"error", code}};
  if (!field.empty()) doc[std::string(field)] = value;
  return {status, doc.dump()};
}

AnalyticsService::AnalyticsService(Snapshot snapshot, ServiceOptions options)
    : snapshot_((validate(snapshot), std::move(snapshot))),
      rates_(effective_rates(snapshot_, options)),
      features_(xai::build_feature_matrix(snapshot_)),
      model_(fit_model(features_, options.tree_params)) {
  health_body_ = json{
      {"status", "ok"},
      {"locales", snapshot_.records.size()},
      {"snapshot_created_at", format_timestamp(snapshot_.created_at)},
  }.dump();

  json locales = json::array();
  for (const auto& r : snapshot_.records) {
    locales.push_back({{"locale_id", r.locale_id}, {"name", r.name}});
  }
  locales_body_ = locales.dump();

  if (model_) {
    json items = json::array();
    for (const auto& fw : xai::feature_importance(*model_, features_.feature_names())) {
      items.push_back({{"feature", fw.feature}, {"weight", fw.weight}});
    }
    importance_body_ = items.dump();
  }
}

ApiResponse AnalyticsService::health() const { return ok(health_body_); }

ApiResponse AnalyticsService::locales() const { return ok(locales_body_); }

ApiResponse AnalyticsService::feature_importance() const {
  if (!model_) return error_response(503, "model_unavailable");
  return ok(importance_body_);
}

ApiResponse AnalyticsService::burden(const QueryParams& query) const {
  const auto it = query.find("zip");
  if (it == query.end() || !is_valid_locale_id(it->second)) {
    return error_response(400, "invalid_zip", "zip", it == query.end() ? "" : it->second);
  }
  try {
    return ok(burden_report_to_json(evaluate_zip(it->second, snapshot_, rates_)));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnknownLocale) {
      return error_response(404, "unknown_locale", "zip", it->second);
    }
    return error_response(422, "burden_unavailable", "detail", e.what());
  }
}

ApiResponse AnalyticsService::pcc(const QueryParams& query) const {
  const auto a = query.find("group_a");
  const auto b = query.find("group_b");
  if (a == query.end() || b == query.end()) {
    return error_response(400, "missing_parameter", "parameter",
                          a == query.end() ? "group_a" : "group_b");
  }
  const auto names_a = xai::expand_feature_groups(split_names(a->second));
  const auto names_b = xai::expand_feature_groups(split_names(b->second));
  try {
    return ok(xai::pcc_to_json(xai::pcc_matrix(features_, names_a, names_b)));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnknownFeature) {
      return error_response(400, "unknown_feature", "feature", e.subject());
    }
    throw;
  }
}

ApiResponse AnalyticsService::handle(std::string_view method, std::string_view path,
                                     const QueryParams& query) const {
  using Handler = ApiResponse (AnalyticsService::*)(const QueryParams&) const;
  struct Route {
    std::string_view path;
    Handler with_query;
    ApiResponse (AnalyticsService::*plain)() const;
  };
  static constexpr Route kRoutes[] = {
      {"/api/health", nullptr, &AnalyticsService::health},
      {"/api/burden", &AnalyticsService::burden, nullptr},
      {"/api/feature-importance", nullptr, &AnalyticsService::feature_importance},
      {"/api/pcc", &AnalyticsService::pcc, nullptr},
      {"/api/locales", nullptr, &AnalyticsService::locales},
  };
  for (const auto& route : kRoutes) {
    if (route.path != path) continue;
    if (method != "GET" && method != "HEAD") {
      return error_response(405, "method_not_allowed", "method", method);
    }
    return route.with_query ? (this->*route.with_query)(query) : (this->*route.plain)();
  }
  return error_response(404, "not_found", "path", path);
}

BindAddress parse_bind_address(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw Error(ErrorCode::InvalidInput, std::string(text), "expected host:port");
  }
  BindAddress out;
  out.host = std::string(text.substr(0, colon));
  const auto port_text = text.substr(colon + 1);
  long port = 0;
  auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (port_text.empty() || ec != std::errc{} || ptr != port_text.data() + port_text.size() ||
      port < 1 || port > 65535) {
    throw Error(ErrorCode::InvalidInput, std::string(text),
                "port must be an integer in [1, 65535]");
  }
  out.port = static_cast<int>(port);
  return out;
}

}  // namespace eeq::api
