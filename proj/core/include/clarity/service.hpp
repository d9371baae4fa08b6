#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "clarity/engine.hpp"

// HTTP front end: POST /classify, GET /health. Answers 503 until an engine
// is installed; the engine is then read without locking.
namespace clarity::service {

struct HttpResult {
  int status = 200;
  std::string body;
};

class Service {
 public:
  explicit Service(std::string allowed_origin = "*");
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Publishes the engine once; later calls replace it atomically.
  void install(std::shared_ptr<const engine::ClassificationEngine> engine);
  bool ready() const;

  // Transport-free handlers, also used by the HTTP routes.
  HttpResult classify(std::string_view body) const;
  HttpResult health() const;

  // Binds host:port (port 0 picks a free one); returns the bound port or -1.
  int bind(const std::string& host, int port);
  // Blocks serving requests until stop().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace clarity::service
