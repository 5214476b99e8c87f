// Copyright 2026 The Lesion Retrieval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lesion/service/http_server.h"

#include <chrono>
#include <csignal>
#include <thread>
#include <utility>

#include <fmt/core.h>
#include <pthread.h>

#include "httplib.h"

#include "lesion/error.h"
#include "lesion/snapshot.h"

namespace lesion::service {
namespace {

constexpr const char* kJson = "application/json";

template <typename Fn>
void Timed(httplib::Response& res, Fn&& handle) {
  const auto start = std::chrono::steady_clock::now();
  const Response r = handle();
  res.status = r.status;
  res.set_content(r.body, kJson);
  const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  res.set_header("X-Latency-Us", std::to_string(us));
}

}  // namespace

struct HttpServer::Impl {
  std::shared_ptr<const QueryService> service;
  httplib::Server server;
};

HttpServer::HttpServer(std::shared_ptr<const QueryService> service)
    : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  const QueryService* svc = impl_->service.get();
  auto& s = impl_->server;
  s.set_payload_max_length(svc->config().max_body_bytes);

  s.Get("/v1/health", [svc](const httplib::Request&, httplib::Response& res) {
    Timed(res, [&] { return svc->Health(); });
  });
  s.Get(R"(/v1/records/([^/]+))", [svc](const httplib::Request& req, httplib::Response& res) {
    const bool include_code = req.has_param("include_code") &&
                              (req.get_param_value("include_code") == "true" ||
                               req.get_param_value("include_code") == "1");
    Timed(res, [&] { return svc->Record(req.matches[1], include_code); });
  });
  s.Post("/v1/query", [svc](const httplib::Request& req, httplib::Response& res) {
    Timed(res, [&] { return svc->Query(req.body); });
  });
  s.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const std::string code = res.status == 404   ? "not_found"
                             : res.status == 413 ? "payload_too_large"
                                                 : "http_error";
    res.set_content(ErrorBody(code, req.method + " " + req.path + " failed with status " +
                                        std::to_string(res.status)),
                    kJson);
  });
  s.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          message = e.what();
        } catch (...) {
        }
        res.status = 500;
        res.set_content(ErrorBody("internal", message), kJson);
      });
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind() {
  const auto& cfg = impl_->service->config();
  int port = cfg.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(cfg.host);
    if (port < 0) port = -1;
  } else if (!impl_->server.bind_to_port(cfg.host, port)) {
    port = -1;
  }
  if (port < 0) {
    throw Error(ErrorCode::kIo, "cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
  }
  return port;
}

void HttpServer::Listen() { impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

int RunServe(const ServiceConfig& cfg) {
  cfg.Validate();
  auto db = std::make_shared<const CaseDatabase>(LoadSnapshot(cfg.snapshot_path));
  auto service = std::make_shared<const QueryService>(db, cfg);
  HttpServer server(service);

  // Block the shutdown signals before any thread starts so only sigwait
  // below receives them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const int port = server.Bind();
  fmt::print(stderr, "serving {} records ({} bits) on {}:{}\n", db->store().size(),
             db->store().hash_bits, cfg.host, port);
  std::thread listener([&server] { server.Listen(); });
  int sig = 0;
  sigwait(&signals, &sig);
  fmt::print(stderr, "received signal {}, shutting down\n", sig);
  server.Stop();
  listener.join();
  return 0;
}

}  // namespace lesion::service
