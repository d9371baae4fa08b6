#include "clarity/service.hpp"

#include <atomic>

#include "clarity/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace clarity::service {
namespace {

using json = nlohmann::ordered_json;

HttpResult error_result(int status, const std::string& message) {
  return {status, json{{"error", message}}.dump()};
}

}  // namespace

struct Service::Impl {
  std::string origin;
  std::shared_ptr<const engine::ClassificationEngine> engine;  // atomic access only
  httplib::Server server;

  std::shared_ptr<const engine::ClassificationEngine> current() const {
    return std::atomic_load_explicit(&engine, std::memory_order_acquire);
  }
};

Service::Service(std::string allowed_origin) : impl_(std::make_unique<Impl>()) {
  impl_->origin = std::move(allowed_origin);
  auto& s = impl_->server;
  s.set_default_headers({{"Access-Control-Allow-Origin", impl_->origin},
                         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                         {"Access-Control-Allow-Headers", "Content-Type"}});
  s.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  s.Post("/classify", [this](const httplib::Request& req, httplib::Response& res) {
    auto r = classify(req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json; charset=utf-8");
  });
  s.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
    auto r = health();
    res.status = r.status;
    res.set_content(r.body, "application/json; charset=utf-8");
  });
}

Service::~Service() { stop(); }

void Service::install(std::shared_ptr<const engine::ClassificationEngine> engine) {
  std::atomic_store_explicit(&impl_->engine, std::move(engine), std::memory_order_release);
}

bool Service::ready() const { return impl_->current() != nullptr; }

HttpResult Service::classify(std::string_view body) const {
  auto e = impl_->current();
  if (!e) return error_result(503, "artifacts not loaded");
  try {
    auto request = engine::parse_request(body);
    return {200, engine::to_json(e->classify(request))};
  } catch (const InputError& ex) {
    return error_result(400, ex.what());
  } catch (const std::exception& ex) {
    return error_result(500, ex.what());
  }
}

HttpResult Service::health() const {
  auto e = impl_->current();
  if (!e) return error_result(503, "artifacts not loaded");
  json j;
  j["status"] = "ok";
  j["config_hash"] = e->config_hash();
  j["corpus"] = e->corpus_name();
  j["model"] = e->model_name();
  return {200, j.dump()};
}

int Service::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::listen() { return impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace clarity::service
