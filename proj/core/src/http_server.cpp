#include <atomic>

#include <httplib.h>

#include "eeq/error.hpp"
#include "eeq/service.hpp"

namespace eeq::api {

struct HttpServer::Impl {
  std::shared_ptr<const AnalyticsService> service;
  httplib::Server server;
  std::atomic<bool> bound{false};
};

namespace {

void write(httplib::Response& res, const ApiResponse& out) {
  res.status = out.status;
  res.set_content(out.body, out.content_type);
}

bool is_api(const std::string& path) { return path.rfind("/api/", 0) == 0 || path == "/api"; }

}  // namespace

HttpServer::HttpServer(std::shared_ptr<const AnalyticsService> service,
                       std::optional<std::filesystem::path> static_assets_dir)
    : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  auto& svr = impl_->server;

  auto dispatch = [svc = impl_->service](const httplib::Request& req,
                                         httplib::Response& res) {
    QueryParams query;
    for (const auto& [key, value] : req.params) query.emplace(key, value);
    write(res, svc->handle(req.method, req.path, query));
  };
  for (const char* pattern : {R"(/api/.*)", R"(/api)"}) {
    svr.Get(pattern, dispatch);
    svr.Post(pattern, dispatch);
    svr.Put(pattern, dispatch);
    svr.Delete(pattern, dispatch);
    svr.Patch(pattern, dispatch);
  }

  if (static_assets_dir) {
    if (!svr.set_mount_point("/", static_assets_dir->string())) {
      throw Error(ErrorCode::Io, static_assets_dir->string(),
                  "static assets directory not found");
    }
  }

  // Anything that slipped through (404 from the router, handler exceptions)
  // still gets a JSON body under /api.
  svr.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (is_api(req.path) && res.body.empty()) {
      write(res, error_response(res.status, res.status == 404 ? "not_found" : "error",
                                "path", req.path));
    }
  });
  svr.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                               std::exception_ptr ep) {
    std::string detail = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      detail = e.what();
    } catch (...) {
    }
    write(res, error_response(500, "internal_error", "detail", detail));
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  auto& svr = impl_->server;
  int bound_port = -1;
  if (port == 0) {
    bound_port = svr.bind_to_any_port(host);
  } else if (svr.bind_to_port(host, port)) {
    bound_port = port;
  }
  if (bound_port <= 0) {
    throw Error(ErrorCode::Io, host + ":" + std::to_string(port), "cannot bind");
  }
  impl_->bound = true;
  return bound_port;
}

void HttpServer::serve() {
  if (!impl_->bound) throw Error(ErrorCode::Io, "server", "serve() before bind()");
  impl_->server.listen_after_bind();
}

void HttpServer::stop() {
  if (impl_ && impl_->bound) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace eeq::api
