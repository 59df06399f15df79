#pragma once

#include <memory>
#include <string>

#include "nudge/service.hpp"

namespace nudge {

/// Serves a Service over HTTP. Bodies are JSON; the token travels as
/// "Authorization: Bearer <token>".
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop() is called.
  bool listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace nudge
