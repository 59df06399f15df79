#include "nudge/http_server.hpp"

#include <httplib.h>

namespace nudge {

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;

  explicit Impl(Service& s) : service(s) {}

  void dispatch(const httplib::Request& req, httplib::Response& res) {
    ApiRequest r;
    r.method = req.method;
    r.path = req.path;
    auto auth = req.get_header_value("Authorization");
    constexpr std::string_view kBearer = "Bearer ";
    if (auth.rfind(kBearer, 0) == 0) r.token = auth.substr(kBearer.size());
    if (!req.body.empty()) {
      r.body = nlohmann::json::parse(req.body, nullptr, false);
      if (r.body.is_discarded()) {
        write(res, error_response(400, "bad_request", "request body is not valid JSON"));
        return;
      }
    }
    write(res, service.handle(r));
  }

  static void write(httplib::Response& res, const ApiResponse& out) {
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) { impl_->dispatch(req, res); };
  impl_->server.Get(R"(/v1/.*)", handler);
  impl_->server.Post(R"(/v1/.*)", handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace nudge
