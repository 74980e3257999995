#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "json.hpp"
#include "periodica/search.hpp"

namespace periodica {

struct HttpRequest {
  std::string method;
  std::string path;  // may carry a query string
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

struct ServiceOptions {
  std::string snapshot_path;     // empty keeps sessions in memory only
  std::string cors_origin = "*";
  SimplifyBudget hint_budget = [] {
    SimplifyBudget b;
    b.max_states = 2000;
    b.threads = 1;
    return b;
  }();
  // Untangle requests above these are refused with 422.
  int max_changes_limit = 8;
  int max_states_limit = 200000;
};

// Sessions of diagram states behind a JSON API. Every state is either the
// parsed root or the result of one recorded operation on its parent. A
// session holds one diagram or the three of a tridiagram; operations name
// the axis they act on.
//
//   POST /session                        {pdg}
//   GET  /session/{id}
//   GET  /session/{id}/tree
//   POST /session/{id}/cancel
//   GET  /session/{id}/state/{sid}
//   GET  /session/{id}/state/{sid}/svg
//   GET  /session/{id}/state/{sid}/moves?axis=a
//   POST /session/{id}/state/{sid}/apply     {axis, move | move_index | change}
//   POST /session/{id}/state/{sid}/simplify  {axis, budget}
//   POST /session/{id}/state/{sid}/untangle  {method, max_changes, budget, max_expanded_members}
//   POST /validate                       {pdg}
class Service {
 public:
  explicit Service(ServiceOptions o = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  HttpResponse handle(const HttpRequest& r);
  HttpResponse handle(const std::string& method, const std::string& path, const std::string& body = "") {
    return handle(HttpRequest{method, path, body});
  }

  // The untangle endpoint with progress reported per layer.
  HttpResponse untangle(const std::string& session, int state, const std::string& body,
                        const std::function<void(const nlohmann::json&)>& on_progress);

  const ServiceOptions& options() const { return options_; }

  struct Session;

 private:
  std::shared_ptr<Session> find(const std::string& id);
  void snapshot();
  void restore();

  ServiceOptions options_;
  std::mutex mutex_;  // guards the session table and the snapshot file
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  int next_session_ = 1;
};

// Serves a Service over HTTP/1.1 with CORS. Untangle requests sent with
// `Accept: text/event-stream` receive `progress` events and a final `result`.
class HttpServer {
 public:
  explicit HttpServer(Service& s);
  ~HttpServer();
  // Returns the bound port; port 0 picks a free one. Throws on failure.
  int bind(const std::string& host, int port);
  void run();   // blocks until stop()
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Binds, prints the address to stderr and serves until the process ends.
int serve(const std::string& host, int port, const ServiceOptions& o = {});

}  // namespace periodica
