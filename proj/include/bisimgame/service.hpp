#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include <json.hpp>

#include "bisimgame/diagnostics.hpp"

namespace bisimgame {

struct ServiceOptions {
  std::size_t max_arena = default_arena_cap();
  std::chrono::seconds idle_timeout{30 * 60};
};

struct ServiceResponse {
  int status;
  nlohmann::json body;
};

// Transport-independent core of the HTTP API; every method is safe to call
// concurrently. Requests on one session are serialized.
class SessionService {
 public:
  explicit SessionService(ServiceOptions opt = {}) : opt_(opt) {}

  ServiceResponse create(const nlohmann::json& body);
  ServiceResponse get(const std::string& id);
  ServiceResponse move(const std::string& id, const nlohmann::json& body);
  ServiceResponse lts(const std::string& id);
  ServiceResponse arena(const std::string& id, int radius);
  ServiceResponse remove(const std::string& id);

  // Drops sessions idle for longer than the timeout; returns how many.
  std::size_t expire_idle();
  std::size_t size() const;

 private:
  struct Record {
    std::mutex mutex;
    GameSession session;
    std::size_t offset;  // first state of the second LTS, or 0
    std::chrono::steady_clock::time_point created, last_used;
  };
  std::shared_ptr<Record> find(const std::string& id);
  std::string fresh_id();

  ServiceOptions opt_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<Record>> sessions_;
  std::uint64_t counter_ = 0;
};

// Snapshot of a session as served by GET /api/session/{id}.
nlohmann::json session_view(const GameSession& session);

class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and serves until stop(); returns false if binding fails.
  bool listen(const std::string& host, int port);
  // Binds to a free port and returns it, or -1.
  int bind_any(const std::string& host);
  bool listen_after_bind();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bisimgame
