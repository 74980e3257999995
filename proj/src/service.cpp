#include "periodica/service.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "periodica/canonical.hpp"
#include "periodica/planar_map.hpp"
#include "periodica/render.hpp"
#include "periodica/text_format.hpp"
#include "periodica/tridiagram.hpp"

namespace periodica {

using nlohmann::json;

namespace {

struct State {
  int id = 0;
  int parent = -1;
  json op;  // null at the root
  std::vector<SquareDiagram> diagrams;  // one, or the three of a tridiagram
};

// A failure with its HTTP status.
struct Failure {
  int status;
  std::string message;
};

HttpResponse reply(int status, const json& j) { return {status, j.dump(), "application/json"}; }
HttpResponse fail(int status, const std::string& message) { return reply(status, {{"error", message}}); }

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Failure{400, "body must be a JSON object"};
  return j;
}

std::vector<SquareDiagram> parse_document(const std::string& text) {
  std::vector<SquareDiagram> out;
  const auto doc = parse_pdg(text);
  if (const auto* d = std::get_if<SquareDiagram>(&doc)) {
    out.push_back(*d);
  } else {
    const auto& t = std::get<Tridiagram>(doc);
    out.assign(t.diagrams.begin(), t.diagrams.end());
  }
  return out;
}

Tridiagram as_tridiagram(const std::vector<SquareDiagram>& ds) {
  Tridiagram t;
  for (int i = 0; i < 3; ++i) t.diagrams[i] = ds[i];
  return t;
}

std::string document_pdg(const std::vector<SquareDiagram>& ds) {
  return ds.size() == 3 ? to_pdg(as_tridiagram(ds)) : to_pdg(ds[0]);
}

std::string document_svg(const std::vector<SquareDiagram>& ds) {
  return ds.size() == 3 ? render_svg(as_tridiagram(ds)) : render_svg(ds[0]);
}

json report_json(const ValidationReport& r) {
  json rules = json::array();
  for (const auto& x : r.rules) rules.push_back({{"rule", x.rule}, {"ok", x.ok}, {"message", x.message}});
  return {{"valid", r.valid()}, {"errors", r.errors}, {"rules", rules}};
}

ValidationReport document_report(const std::vector<SquareDiagram>& ds) {
  return ds.size() == 3 ? check_tridiagram(as_tridiagram(ds)) : validate(ds[0]);
}

json summary(const State& s) {
  json crossings = json::array(), codes = json::array();
  int total = 0;
  for (const auto& d : s.diagrams) {
    crossings.push_back(d.crossings());
    codes.push_back(code_hex(canonical_code(d)));
    total += d.crossings();
  }
  return {{"state_id", s.id},
          {"parent", s.parent},
          {"op", s.op},
          {"kind", s.diagrams.size() == 3 ? "tridiagram" : "diagram"},
          {"triplet", crossings},
          {"crossings", total},
          {"codes", codes}};
}

json hint(const State& s, const SimplifyBudget& b) {
  json crossings = json::array();
  int total = 0;
  bool exhaustive = true;
  for (const auto& d : s.diagrams) {
    const auto r = simplify_ex(d, b);
    crossings.push_back(r.diagram.crossings());
    total += r.diagram.crossings();
    exhaustive = exhaustive && r.exhaustive;
  }
  return {{"triplet", crossings},
          {"crossings", total},
          {"exhaustive", exhaustive},
          {"text", "simplifies to " + std::to_string(total)}};
}

json state_json(const State& s, const SimplifyBudget& b) {
  json j = summary(s);
  j["pdg"] = document_pdg(s.diagrams);
  j["svg"] = document_svg(s.diagrams);
  j["hint"] = hint(s, b);
  return j;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '/'))
    if (!part.empty()) out.push_back(part);
  return out;
}

std::map<std::string, std::string> parse_query(const std::string& q) {
  std::map<std::string, std::string> out;
  std::stringstream ss(q);
  std::string part;
  while (std::getline(ss, part, '&')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos)
      out[part] = "";
    else
      out[part.substr(0, eq)] = part.substr(eq + 1);
  }
  return out;
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Failure{400, what + " must be an integer"};
}

// 1-based axis into a state's diagrams; single diagrams only have axis 1.
int axis_of(const json& j, const State& s) {
  const json a = j.value("axis", json(1));
  if (!a.is_number_integer()) throw Failure{400, "axis must be an integer"};
  const int axis = a.get<int>();
  if (axis < 1 || axis > static_cast<int>(s.diagrams.size()))
    throw Failure{400, "axis out of range for this document"};
  return axis;
}

int int_field(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) throw Failure{400, std::string(key) + " must be an integer"};
  return j[key].get<int>();
}

}  // namespace

struct Service::Session {
  std::string id;
  std::mutex mutex;  // serialises operations on the states
  std::vector<State> states;
  std::mutex cancel_mutex;
  std::vector<std::shared_ptr<std::atomic<bool>>> running;  // untangle runs to cancel

  const State& state(int sid) const {
    if (sid < 0 || sid >= static_cast<int>(states.size())) throw Failure{404, "no such state"};
    return states[sid];
  }
  json tree() const {
    json out = json::array();
    for (const auto& s : states) out.push_back(summary(s));
    return {{"session_id", id}, {"states", out}};
  }
};

Service::Service(ServiceOptions o) : options_(std::move(o)) { restore(); }
Service::~Service() = default;

std::shared_ptr<Service::Session> Service::find(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Failure{404, "no such session"};
  return it->second;
}

void Service::snapshot() {
  if (options_.snapshot_path.empty()) return;
  std::lock_guard lock(mutex_);
  json sessions = json::array();
  for (const auto& [id, s] : sessions_) {
    std::lock_guard session_lock(s->mutex);
    json states = json::array();
    for (const auto& st : s->states)
      states.push_back({{"id", st.id}, {"parent", st.parent}, {"op", st.op}, {"pdg", document_pdg(st.diagrams)}});
    sessions.push_back({{"id", id}, {"states", states}});
  }
  const json doc = {{"format", "periodica-sessions 1"}, {"next_session", next_session_}, {"sessions", sessions}};
  const std::string tmp = options_.snapshot_path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << doc.dump(1) << '\n';
    if (!out) throw std::runtime_error("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, options_.snapshot_path);
}

void Service::restore() {
  if (options_.snapshot_path.empty() || !std::filesystem::exists(options_.snapshot_path)) return;
  const json doc = json::parse(read_file(options_.snapshot_path));
  if (doc.value("format", "") != "periodica-sessions 1")
    throw std::runtime_error(options_.snapshot_path + " is not a session snapshot");
  next_session_ = doc.at("next_session").get<int>();
  for (const auto& js : doc.at("sessions")) {
    auto s = std::make_shared<Session>();
    s->id = js.at("id").get<std::string>();
    for (const auto& jst : js.at("states")) {
      State st;
      st.id = jst.at("id").get<int>();
      st.parent = jst.at("parent").get<int>();
      st.op = jst.at("op");
      st.diagrams = parse_document(jst.at("pdg").get<std::string>());
      s->states.push_back(std::move(st));
    }
    sessions_[s->id] = s;
  }
}

HttpResponse Service::handle(const HttpRequest& r) {
  const auto q = r.path.find('?');
  const auto parts = split_path(r.path.substr(0, q));
  const auto query = q == std::string::npos ? std::map<std::string, std::string>{} : parse_query(r.path.substr(q + 1));
  const std::string& m = r.method;
  const std::size_t n = parts.size();
  try {
    if (m == "OPTIONS") return {204, "", "text/plain"};
    if (n == 1 && parts[0] == "health" && m == "GET") return reply(200, {{"ok", true}});

    if (n == 1 && parts[0] == "validate" && m == "POST") {
      const json body = parse_body(r.body);
      if (!body.contains("pdg") || !body["pdg"].is_string()) throw Failure{400, "pdg must be a string"};
      try {
        return reply(200, report_json(document_report(parse_document(body["pdg"].get<std::string>()))));
      } catch (const ParseError& e) {
        return reply(200, {{"valid", false}, {"parse_error", e.what()}, {"line", e.line()}, {"column", e.column()}});
      }
    }

    if (n == 1 && parts[0] == "session" && m == "POST") {
      const json body = parse_body(r.body);
      if (!body.contains("pdg") || !body["pdg"].is_string()) throw Failure{400, "pdg must be a string"};
      State root;
      try {
        root.diagrams = parse_document(body["pdg"].get<std::string>());
      } catch (const ParseError& e) {
        return reply(400, {{"error", e.what()}, {"line", e.line()}, {"column", e.column()}});
      }
      const auto report = document_report(root.diagrams);
      if (!report.valid()) return reply(400, {{"error", "invalid diagram"}, {"report", report_json(report)}});
      auto s = std::make_shared<Session>();
      {
        std::lock_guard lock(mutex_);
        s->id = "s" + std::to_string(next_session_++);
        s->states.push_back(std::move(root));
        sessions_[s->id] = s;
      }
      snapshot();
      return reply(201, {{"session_id", s->id}, {"state_id", 0}, {"summary", summary(s->states[0])}});
    }

    if (n < 2 || parts[0] != "session") return fail(404, "no such endpoint");
    auto session = find(parts[1]);

    if (n == 2 && m == "GET") {
      std::lock_guard lock(session->mutex);
      return reply(200, {{"session_id", session->id},
                         {"states", session->states.size()},
                         {"root", summary(session->states[0])}});
    }
    if (n == 3 && parts[2] == "tree" && m == "GET") {
      std::lock_guard lock(session->mutex);
      return reply(200, session->tree());
    }
    if (n == 3 && parts[2] == "cancel" && m == "POST") {
      std::lock_guard lock(session->cancel_mutex);
      for (auto& flag : session->running) flag->store(true);
      return reply(200, {{"cancelled", session->running.size()}});
    }
    if (n < 4 || parts[2] != "state") return fail(404, "no such endpoint");
    const int sid = to_int(parts[3], "state id");

    if (n == 5 && parts[4] == "untangle" && m == "POST") return untangle(session->id, sid, r.body, nullptr);

    std::unique_lock lock(session->mutex);
    const State& st = session->state(sid);
    if (n == 4 && m == "GET") return reply(200, state_json(st, options_.hint_budget));
    if (n == 5 && parts[4] == "svg" && m == "GET") return {200, document_svg(st.diagrams), "image/svg+xml"};
    if (n == 5 && parts[4] == "moves" && m == "GET") {
      json jq = json::object();
      if (query.count("axis")) jq["axis"] = to_int(query.at("axis"), "axis");
      const int axis = axis_of(jq, st);
      json list = json::array();
      const auto moves = enumerate_moves(st.diagrams[axis - 1]);
      for (std::size_t i = 0; i < moves.size(); ++i) {
        json j = to_json(moves[i]);
        j["index"] = i;
        list.push_back(std::move(j));
      }
      return reply(200, {{"state_id", sid}, {"axis", axis}, {"moves", list}});
    }

    if (n == 5 && (parts[4] == "apply" || parts[4] == "simplify") && m == "POST") {
      const json body = parse_body(r.body);
      const int axis = axis_of(body, st);
      const SquareDiagram& d = st.diagrams[axis - 1];
      State child;
      child.parent = sid;
      child.diagrams = st.diagrams;
      SquareDiagram& out = child.diagrams[axis - 1];
      if (parts[4] == "simplify") {
        SimplifyBudget b;
        try {
          b = budget_from_json(body.value("budget", json::object()));
        } catch (const std::exception& e) {
          throw Failure{400, e.what()};
        }
        if (b.max_states > options_.max_states_limit) throw Failure{422, "max_states above the service limit"};
        out = simplify(d, b);
        child.op = {{"type", "simplify"}, {"axis", axis}, {"budget", to_json(b)}};
      } else if (body.contains("change")) {
        if (!body["change"].is_number_integer()) throw Failure{400, "change must be a crossing id"};
        const int id = body["change"].get<int>();
        const int index = d.node_index(id);
        if (index < 0 || d.node(index).kind != NodeKind::crossing)
          throw Failure{409, "no crossing with id " + std::to_string(id)};
        out = change_crossing(d, index);
        child.op = {{"type", "change"}, {"axis", axis}, {"crossing_id", id}};
      } else if (body.contains("move_index") || body.contains("move")) {
        MoveApplication mv;
        if (body.contains("move_index")) {
          const int i = int_field(body, "move_index", -1);
          const auto moves = enumerate_moves(d);
          if (i < 0 || i >= static_cast<int>(moves.size())) throw Failure{409, "no move with that index"};
          mv = moves[i];
        } else {
          try {
            mv = move_from_json(body["move"]);
          } catch (const std::exception& e) {
            throw Failure{400, std::string("bad move: ") + e.what()};
          }
        }
        try {
          out = apply_move(d, mv);
        } catch (const PreconditionError& e) {
          throw Failure{409, e.what()};
        }
        child.op = {{"type", "move"}, {"axis", axis}, {"move", to_json(mv)}};
      } else {
        throw Failure{400, "expected move, move_index or change"};
      }
      child.id = static_cast<int>(session->states.size());
      session->states.push_back(std::move(child));
      const json j = state_json(session->states.back(), options_.hint_budget);
      lock.unlock();
      snapshot();
      return reply(201, j);
    }
    return fail(404, "no such endpoint");
  } catch (const Failure& f) {
    return fail(f.status, f.message);
  } catch (const std::exception& e) {
    return fail(500, e.what());
  }
}

HttpResponse Service::untangle(const std::string& session_id, int sid, const std::string& body_text,
                               const std::function<void(const json&)>& on_progress) {
  try {
    auto session = find(session_id);
    const json body = parse_body(body_text);
    std::vector<SquareDiagram> diagrams;
    {
      std::lock_guard lock(session->mutex);
      diagrams = session->state(sid).diagrams;
    }
    const std::string method = body.value("method", std::string("bfs"));
    if (method != "bfs" && method != "fixed") throw Failure{400, "method must be bfs or fixed"};
    UntangleOptions o;
    try {
      o.budget = budget_from_json(body.value("budget", json::object()));
    } catch (const std::exception& e) {
      throw Failure{400, e.what()};
    }
    o.max_changes = int_field(body, "max_changes", o.max_changes);
    o.max_expanded_members = int_field(body, "max_expanded_members", o.max_expanded_members);
    const int max_crossings = int_field(body, "max_crossings", 12);
    if (o.max_changes < 0) throw Failure{400, "max_changes must not be negative"};
    if (o.max_changes > options_.max_changes_limit) throw Failure{422, "max_changes above the service limit"};
    if (o.budget.max_states > options_.max_states_limit) throw Failure{422, "max_states above the service limit"};

    auto flag = std::make_shared<std::atomic<bool>>(false);
    {
      std::lock_guard lock(session->cancel_mutex);
      session->running.push_back(flag);
    }
    struct Unregister {
      Session& s;
      std::shared_ptr<std::atomic<bool>> f;
      ~Unregister() {
        std::lock_guard lock(s.cancel_mutex);
        std::erase(s.running, f);
      }
    } unregister{*session, flag};
    o.cancel = flag.get();

    std::vector<UntanglingResult> results;
    for (std::size_t a = 0; a < diagrams.size(); ++a) {
      if (on_progress) {
        o.on_progress = [&, axis = static_cast<int>(a) + 1](const Progress& p) {
          on_progress({{"axis", axis},
                       {"layer", p.layer},
                       {"frontier", p.frontier},
                       {"classes", p.classes},
                       {"best_crossings", p.best_crossings},
                       {"best_layer", p.best_layer}});
        };
      }
      try {
        auto r = method == "bfs" ? untangle_bfs(diagrams[a], o)
                                 : untangle_fixed_shadow(diagrams[a], o.budget, max_crossings);
        results.push_back(std::move(r));
      } catch (const BudgetError& e) {
        throw Failure{422, e.what()};
      }
    }
    json j = to_json(results);
    j["state_id"] = sid;
    j["cancelled"] = flag->load();
    return reply(200, j);
  } catch (const Failure& f) {
    return fail(f.status, f.message);
  } catch (const std::exception& e) {
    return fail(500, e.what());
  }
}

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;
  explicit Impl(Service& s) : service(s) {}
};

HttpServer::HttpServer(Service& s) : impl_(std::make_unique<Impl>(s)) {
  auto& srv = impl_->server;
  Service& service = impl_->service;
  srv.set_default_headers({{"Access-Control-Allow-Origin", service.options().cors_origin},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type, Accept"}});
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    const auto r = service.handle(req.method, req.target, req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  srv.Get(".*", forward);
  srv.Options(".*", forward);
  srv.Post(".*", [&service, forward](const httplib::Request& req, httplib::Response& res) {
    const auto parts = split_path(req.path);
    const bool stream = parts.size() == 5 && parts[0] == "session" && parts[2] == "state" &&
                        parts[4] == "untangle" &&
                        req.get_header_value("Accept").find("text/event-stream") != std::string::npos;
    if (!stream) return forward(req, res);
    const std::string session = parts[1], body = req.body;
    int sid = 0;
    try {
      sid = std::stoi(parts[3]);
    } catch (const std::exception&) {
      return forward(req, res);
    }
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider("text/event-stream", [&service, session, sid, body](std::size_t, httplib::DataSink& sink) {
      auto event = [&sink](const std::string& name, const std::string& data) {
        const std::string e = "event: " + name + "\ndata: " + data + "\n\n";
        return sink.write(e.data(), e.size());
      };
      const auto r = service.untangle(session, sid, body, [&](const json& p) { event("progress", p.dump()); });
      event("result", json{{"status", r.status}, {"body", json::parse(r.body)}}.dump());
      sink.done();
      return true;
    });
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  auto& srv = impl_->server;
  if (port == 0) {
    const int p = srv.bind_to_any_port(host);
    if (p < 0) throw std::runtime_error("cannot bind " + host);
    return p;
  }
  if (!srv.bind_to_port(host, port)) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }
void HttpServer::stop() { impl_->server.stop(); }
bool HttpServer::running() const { return impl_->server.is_running(); }

int serve(const std::string& host, int port, const ServiceOptions& o) {
  Service service(o);
  HttpServer server(service);
  const int bound = server.bind(host, port);
  std::fprintf(stderr, "periodica service on http://%s:%d\n", host.c_str(), bound);
  server.run();
  return 0;
}

}  // namespace periodica
