// The JSON service, through Service::handle and over a live socket.
#include <filesystem>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "periodica/projection.hpp"
#include "periodica/service.hpp"
#include "periodica/text_format.hpp"
#include "support.hpp"

using namespace periodica;
using nlohmann::json;

namespace {

const char* kCurl = "pdg 1\nX 1 a0 a1 a2 a3 over=02\nA a0 a1\nA a2 a3\n";

json body(const HttpResponse& r) { return json::parse(r.body); }

std::string open(Service& s, const std::string& pdg) {
  const auto r = s.handle("POST", "/session", json{{"pdg", pdg}}.dump());
  REQUIRE(r.status == 201);
  return body(r)["session_id"].get<std::string>();
}

std::string state_path(const std::string& id, int sid, const std::string& tail = "") {
  return "/session/" + id + "/state/" + std::to_string(sid) + tail;
}

json post(Service& s, const std::string& path, const json& j, int status) {
  const auto r = s.handle("POST", path, j.dump());
  CHECK_MESSAGE(r.status == status, r.body);
  return body(r);
}

// Recomputes every state from its parent and the recorded operation.
void check_history(Service& s, const std::string& id) {
  const auto tree = body(s.handle("GET", "/session/" + id + "/tree"));
  std::vector<std::vector<SquareDiagram>> docs;
  for (const auto& st : tree["states"]) {
    const int sid = st["state_id"].get<int>();
    const auto pdg = body(s.handle("GET", state_path(id, sid)))["pdg"].get<std::string>();
    std::vector<SquareDiagram> ds;
    const auto doc = parse_pdg(pdg);
    if (const auto* d = std::get_if<SquareDiagram>(&doc))
      ds.push_back(*d);
    else
      for (const auto& d : std::get<Tridiagram>(doc).diagrams) ds.push_back(d);
    if (sid > 0) {
      const auto& op = st["op"];
      const int parent = st["parent"].get<int>();
      REQUIRE(parent < sid);
      auto expect = docs[parent];
      const int a = op["axis"].get<int>() - 1;
      const std::string type = op["type"];
      if (type == "move") {
        expect[a] = apply_move(expect[a], move_from_json(op["move"]));
      } else if (type == "change") {
        expect[a] = change_crossing(expect[a], expect[a].node_index(op["crossing_id"].get<int>()));
      } else {
        REQUIRE(type == "simplify");
        expect[a] = simplify(expect[a], budget_from_json(op["budget"]));
      }
      for (std::size_t k = 0; k < ds.size(); ++k) CHECK(to_pdg(expect[k]) == to_pdg(ds[k]));
    }
    docs.push_back(ds);
  }
}

}  // namespace

TEST_CASE("sessions start from valid documents only") {
  Service s;
  const auto r = s.handle("POST", "/session", json{{"pdg", "pdg 1\n"}}.dump());
  REQUIRE(r.status == 201);
  CHECK(body(r)["summary"]["triplet"] == json::array({0}));
  CHECK(s.handle("POST", "/session", "{not json").status == 400);
  CHECK(s.handle("POST", "/session", json{{"pdg", 3}}.dump()).status == 400);
  const auto bad = s.handle("POST", "/session", json{{"pdg", "pdg 1\nX 1 a b c d\n"}}.dump());
  CHECK(bad.status == 400);
  const auto loop = s.handle("POST", "/session", json{{"pdg", "pdg 1\nM 1 d c\nA d d\nA c c\n"}}.dump());
  CHECK(loop.status == 400);
  CHECK(s.handle("GET", "/session/nope").status == 404);
  CHECK(s.handle("GET", "/session/s1/state/7").status == 404);
  CHECK(s.handle("GET", "/session/s1/state/x").status == 400);
  CHECK(s.handle("GET", "/elsewhere").status == 404);
}

TEST_CASE("move lists are stable and applicable") {
  Service s;
  const auto empty = open(s, "pdg 1\n");
  CHECK(body(s.handle("GET", state_path(empty, 0, "/moves")))["moves"].empty());
  const auto id = open(s, kCurl);
  const auto first = s.handle("GET", state_path(id, 0, "/moves"));
  CHECK(first.body == s.handle("GET", state_path(id, 0, "/moves")).body);
  const auto moves = body(first)["moves"];
  int r1 = -1;
  for (const auto& m : moves)
    if (m["kind"] == "R1" && m["direction"] == "forward") r1 = m["index"].get<int>();
  REQUIRE(r1 >= 0);
  const auto child = post(s, state_path(id, 0, "/apply"), {{"move_index", r1}}, 201);
  CHECK(child["crossings"] == 0);
  CHECK(child["parent"] == 0);
  // the same move again by value, on the original state
  post(s, state_path(id, 0, "/apply"), {{"move", moves[r1]}}, 201);
  // not applicable to the child
  post(s, state_path(id, 1, "/apply"), {{"move", moves[r1]}}, 409);
  post(s, state_path(id, 0, "/apply"), {{"move_index", 999}}, 409);
  post(s, state_path(id, 0, "/apply"), {{"nothing", 1}}, 400);
  check_history(s, id);
}

TEST_CASE("backward moves add what the table says") {
  Service s;
  const auto id = open(s, read_file(support::data_path("fixtures/thread-ring.pdg")));
  const auto moves = body(s.handle("GET", state_path(id, 0, "/moves")))["moves"];
  int done = 0;
  for (const auto& m : moves) {
    if (m["kind"] != "R2" || m["direction"] != "backward") continue;
    const auto child = post(s, state_path(id, 0, "/apply"), {{"move", m}}, 201);
    CHECK(child["crossings"] == 2 + m["d_crossings"].get<int>());
    CHECK(m["d_crossings"] == 2);
    if (++done == 3) break;
  }
  CHECK(done > 0);
  check_history(s, id);
}

TEST_CASE("changing a crossing twice returns to the same code") {
  Service s;
  const auto id = open(s, read_file(support::data_path("fixtures/hopf.pdg")));
  const auto root = body(s.handle("GET", state_path(id, 0)));
  CHECK(root["hint"]["crossings"] == 2);
  const auto once = post(s, state_path(id, 0, "/apply"), {{"change", 1}}, 201);
  CHECK(once["crossings"] == 2);
  CHECK(once["hint"]["text"] == "simplifies to 0");
  const auto twice = post(s, state_path(id, 1, "/apply"), {{"change", 1}}, 201);
  CHECK(twice["codes"] == root["codes"]);
  CHECK(twice["parent"] == 1);
  post(s, state_path(id, 0, "/apply"), {{"change", 42}}, 409);
  post(s, state_path(id, 0, "/apply"), {{"change", 1}, {"axis", 2}}, 400);
  const auto simplified = post(s, state_path(id, 1, "/simplify"), json::object(), 201);
  CHECK(simplified["crossings"] == 0);
  const auto tree = body(s.handle("GET", "/session/" + id + "/tree"));
  CHECK(tree["states"].size() == 4);
  check_history(s, id);
}

TEST_CASE("untangling through the service matches the library") {
  Service s;
  const auto hopf = support::fixture("hopf.pdg");
  const auto id = open(s, to_pdg(hopf));
  const auto r = post(s, state_path(id, 0, "/untangle"), json::object(), 200);
  CHECK(r["u_upper"] == 1);
  CHECK(r["cancelled"] == false);
  CHECK(r["axes"][0] == to_json(untangle_bfs(hopf)));
  const auto again = s.handle("POST", state_path(id, 0, "/untangle"), "{}");
  CHECK(json::parse(again.body) == r);
  const auto fixed = post(s, state_path(id, 0, "/untangle"), {{"method", "fixed"}}, 200);
  CHECK(fixed["u_upper"] == 1);
  post(s, state_path(id, 0, "/untangle"), {{"max_changes", 99}}, 422);
  post(s, state_path(id, 0, "/untangle"), {{"budget", {{"max_states", 10000000}}}}, 422);
  post(s, state_path(id, 0, "/untangle"), {{"method", "fixed"}, {"max_crossings", 1}}, 422);
  post(s, state_path(id, 0, "/untangle"), {{"budget", {{"bogus", 1}}}}, 400);
  post(s, state_path(id, 0, "/untangle"), {{"method", "guess"}}, 400);
  post(s, state_path(id, 5, "/untangle"), json::object(), 404);

  const auto zero = open(s, "pdg 1\nM 1 d c\nA d c\n");
  CHECK(post(s, state_path(zero, 0, "/untangle"), json::object(), 200)["u_upper"] == 0);
}

TEST_CASE("untangle runs can be cancelled") {
  Service s;
  // two separate Hopf links need two changes, so a second layer is pending
  const auto id = open(s,
                       "pdg 1\nX 1 a0 a1 a2 a3 over=13\nX 2 b0 b1 b2 b3 over=02\n"
                       "X 3 c0 c1 c2 c3 over=13\nX 4 d0 d1 d2 d3 over=02\n"
                       "A a1 b1\nA a3 b3\nA b2 a0\nA a2 b0\nA c1 d1\nA c3 d3\nA d2 c0\nA c2 d0\n");
  int events = 0;
  const auto r = s.untangle(id, 0, "{}", [&](const json& p) {
    ++events;
    CHECK(p.contains("frontier"));
    CHECK(body(s.handle("POST", "/session/" + id + "/cancel"))["cancelled"] == 1);
  });
  REQUIRE(r.status == 200);
  CHECK(events >= 1);
  CHECK(body(r)["cancelled"] == true);
  CHECK(body(r)["exhaustive"] == false);
  CHECK(body(s.handle("POST", "/session/" + id + "/cancel"))["cancelled"] == 0);
}

TEST_CASE("tridiagram sessions act on one axis at a time") {
  Service s;
  const auto t = tridiagram_of(perturb_generic(load_net(read_file(support::data_path("nets/srs.net")))));
  const auto id = open(s, to_pdg(t));
  const auto root = body(s.handle("GET", state_path(id, 0)));
  CHECK(root["kind"] == "tridiagram");
  CHECK(root["triplet"] == json::array({t.diagrams[0].crossings(), t.diagrams[1].crossings(), t.diagrams[2].crossings()}));
  const auto moves = body(s.handle("GET", state_path(id, 0, "/moves?axis=3")));
  CHECK(moves["axis"] == 3);
  CHECK(moves["moves"].size() == enumerate_moves(t.diagrams[2]).size());
  post(s, state_path(id, 0, "/apply"), {{"axis", 3}, {"move_index", 0}}, 201);
  post(s, state_path(id, 0, "/apply"), {{"axis", 4}, {"move_index", 0}}, 400);
  check_history(s, id);
  const auto svg = s.handle("GET", state_path(id, 0, "/svg"));
  CHECK(svg.content_type == "image/svg+xml");
  CHECK(svg.body.find("class=\"diagram\"") != std::string::npos);
}

TEST_CASE("validation reports without creating sessions") {
  Service s;
  const auto ok = body(s.handle("POST", "/validate", json{{"pdg", kCurl}}.dump()));
  CHECK(ok["valid"] == true);
  const auto broken = body(s.handle("POST", "/validate", json{{"pdg", "pdg 1\nQ\n"}}.dump()));
  CHECK(broken["valid"] == false);
  CHECK(broken["line"] == 2);
  CHECK(s.handle("GET", "/session/s1").status == 404);
}

TEST_CASE("snapshots restore the session trees") {
  const auto path = (std::filesystem::temp_directory_path() / "periodica-test-sessions.json").string();
  std::filesystem::remove(path);
  ServiceOptions o;
  o.snapshot_path = path;
  std::string tree, id;
  {
    Service s(o);
    id = open(s, read_file(support::data_path("fixtures/thread-ring.pdg")));
    post(s, state_path(id, 0, "/apply"), {{"change", 2}}, 201);
    post(s, state_path(id, 1, "/apply"), {{"move_index", 0}}, 201);
    tree = s.handle("GET", "/session/" + id + "/tree").body;
  }
  Service s(o);
  CHECK(s.handle("GET", "/session/" + id + "/tree").body == tree);
  check_history(s, id);
  CHECK(open(s, "pdg 1\n") != id);
  std::filesystem::remove(path);
}

TEST_CASE("the HTTP server speaks JSON, CORS and event streams") {
  Service s;
  HttpServer server(s);
  const int port = server.bind("127.0.0.1", 0);
  std::thread t([&] { server.run(); });
  httplib::Client c("127.0.0.1", port);
  for (int i = 0; i < 200 && !server.running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));

  auto created = c.Post("/session", json{{"pdg", read_file(support::data_path("fixtures/hopf.pdg"))}}.dump(),
                        "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");
  const auto id = json::parse(created->body)["session_id"].get<std::string>();

  auto moves = c.Get("/session/" + id + "/state/0/moves?axis=1");
  REQUIRE(moves);
  CHECK(moves->status == 200);
  CHECK(json::parse(moves->body)["axis"] == 1);

  auto pre = c.Options("/session");
  REQUIRE(pre);
  CHECK(pre->status == 204);
  CHECK(pre->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);

  httplib::Headers sse{{"Accept", "text/event-stream"}};
  auto stream = c.Post("/session/" + id + "/state/0/untangle", sse, "{}", "application/json");
  REQUIRE(stream);
  CHECK(stream->get_header_value("Content-Type").find("text/event-stream") == 0);
  CHECK(stream->body.find("event: progress") != std::string::npos);
  const auto at = stream->body.find("event: result\ndata: ");
  REQUIRE(at != std::string::npos);
  const auto line = stream->body.substr(at + 20, stream->body.find('\n', at + 20) - at - 20);
  const auto result = json::parse(line);
  CHECK(result["status"] == 200);
  CHECK(result["body"]["u_upper"] == 1);

  auto plain = c.Post("/session/" + id + "/state/0/untangle", "{}", "application/json");
  REQUIRE(plain);
  CHECK(json::parse(plain->body) == result["body"]);

  server.stop();
  t.join();
}
