// The command line, run in process.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "periodica/cli.hpp"
#include "periodica/text_format.hpp"
#include "support.hpp"

using namespace periodica;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "periodica");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto p = (std::filesystem::temp_directory_path() / ("periodica-cli-" + name)).string();
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

int count(const std::string& s, const std::string& what) {
  int n = 0;
  for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("validate reports rules and exit codes") {
  const auto empty = run({"validate", temp_file("empty.pdg", "")});
  CHECK(empty.code == 1);
  CHECK(json::parse(empty.out)["parse_error"].is_string());
  CHECK(run({"validate", support::data_path("fixtures/hopf.pdg")}).code == 0);
  const std::map<std::string, std::string> broken = {
      {"shared-slot.pdg", "5"}, {"slot-gap.pdg", "6"}, {"twisted-crossing.pdg", "euler"}};
  for (const auto& [file, rule] : broken) {
    const auto r = run({"validate", support::data_path("invalid/" + file)});
    CHECK(r.code == 1);
    bool found = false;
    const auto report = json::parse(r.out);
    for (const auto& x : report["rules"]) found = found || (x["rule"] == rule && x["ok"] == false);
    CHECK_MESSAGE(found, file);
  }
  const auto table = run({"validate", support::data_path("invalid/shared-slot.pdg"), "--pretty"});
  CHECK(table.out.find("FAIL   5") != std::string::npos);
  CHECK(run({"validate", "/nonexistent.pdg"}).code == 1);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"untangle"}).code == 2);
  CHECK(run({"untangle", "x.pdg", "--method", "guess"}).code == 2);
  CHECK(run({"project", "x.net", "--axis", "4"}).code == 2);
  CHECK(run({"catalogue", support::data_path("moves.catalogue")}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("a thread along the first axis projects to a marker and two puncture pairs") {
  const auto net = temp_file("thread.net", "vertex a 0.5 0.5 0.5\nedge a a 1 0 0 via 0.7 0.3 0.5 1.2 0.5 0.7\n");
  const auto along = run({"project", net, "--axis", "1"});
  REQUIRE(along.code == 0);
  const auto d = parse_diagram(along.out);
  CHECK(d.markers() == 1);
  CHECK(d.crossings() == 0);
  const auto t = parse_tridiagram(run({"project", net}).out);
  CHECK(t.diagrams[1].crossings() + t.diagrams[2].crossings() == 0);
  CHECK(t.diagrams[1].punctures().size() + t.diagrams[2].punctures().size() == 4);
}

TEST_CASE("projection is deterministic per seed") {
  const auto net = support::data_path("nets/srs.net");
  const auto a = run({"project", net, "--seed", "7"});
  const auto b = run({"project", net, "--seed", "7"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  ::setenv("PERIODICA_SEED", "7", 1);
  const auto env = run({"project", net});
  ::unsetenv("PERIODICA_SEED");
  CHECK(env.out == a.out);
  ::setenv("PERIODICA_SEED", "seven", 1);
  CHECK(run({"project", net}).code == 2);
  ::unsetenv("PERIODICA_SEED");
  CHECK(run({"project", temp_file("bad.net", "vertex a 0.5\n")}).code == 1);
}

TEST_CASE("dia-c projects, simplifies and renders without crossings") {
  const auto r = run({"project", support::data_path("nets/dia-c.net"), "--simplify"});
  REQUIRE(r.code == 0);
  const auto t = parse_tridiagram(r.out);
  for (const auto& d : t.diagrams) CHECK(d.crossings() == 0);
  const auto svg = run({"render", temp_file("dia-c.pdg", r.out)});
  REQUIRE(svg.code == 0);
  CHECK(count(svg.out, "class=\"diagram\"") == 3);
  CHECK(count(svg.out, "class=\"crossing\"") == 0);
  const auto u = json::parse(run({"untangle", temp_file("dia-c.pdg", r.out)}).out);
  CHECK(u["u_upper"] == 0);
  CHECK(u["axes"].size() == 3);
}

TEST_CASE("render draws frames, markers and crossings") {
  const auto empty = run({"render", temp_file("empty-diagram.pdg", "pdg 1\n")});
  REQUIRE(empty.code == 0);
  CHECK(count(empty.out, "class=\"frame\"") == 1);
  CHECK(count(empty.out, "class=\"marker\"") == 0);
  const auto marker = run({"render", support::data_path("fixtures/front-thread.pdg")});
  CHECK(count(marker.out, "class=\"dot\"") == 1);
  CHECK(count(marker.out, "class=\"circle\"") == 1);
  const auto hopf = run({"render", support::data_path("fixtures/hopf.pdg"), "--gap", "0"});
  CHECK(hopf.code == 1);
}

TEST_CASE("untangle and simplify report JSON") {
  const auto zero = run({"untangle", support::data_path("fixtures/front-thread.pdg")});
  REQUIRE(zero.code == 0);
  CHECK(json::parse(zero.out)["u_upper"] == 0);
  for (const std::string method : {"bfs", "fixed"}) {
    const auto r = run({"untangle", support::data_path("fixtures/hopf.pdg"), "--method", method, "--threads", "1"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["u_upper"] == 1);
    CHECK(json::parse(r.out)["axes"][0]["method"] == method);
  }
  const auto many = run({"untangle", support::data_path("fixtures/hopf.pdg"), "--threads", "4"});
  CHECK(many.out == run({"untangle", support::data_path("fixtures/hopf.pdg"), "--threads", "1"}).out);
  const auto table = run({"--pretty", "untangle", support::data_path("fixtures/hopf.pdg")});
  CHECK(table.out.find("total u_upper 1") != std::string::npos);
  const auto s = run({"simplify", support::data_path("fixtures/unlink-bigon.pdg")});
  REQUIRE(s.code == 0);
  CHECK(parse_diagram(s.out).crossings() == 0);
}

TEST_CASE("moves and catalogue commands") {
  const auto curl = temp_file("curl.pdg", "pdg 1\nX 1 a0 a1 a2 a3 over=02\nA a0 a1\nA a2 a3\n");
  const auto list = json::parse(run({"moves", curl}).out);
  bool r1 = false;
  for (const auto& m : list) r1 = r1 || m["kind"] == "R1";
  CHECK(r1);
  CHECK(run({"moves", curl, "--axis", "2"}).code == 1);
  const auto verified = run({"catalogue", "--verify", support::data_path("moves.catalogue")});
  CHECK(verified.code == 0);
  CHECK(json::parse(verified.out)["failures"].empty());
}

TEST_CASE("report tabulates nets") {
  const auto r = run({"report", support::data_path("nets/dia-c.net"), support::data_path("nets/srs.net")});
  REQUIRE(r.code == 0);
  const auto rows = json::parse(r.out);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row["triplet"] == json::array({0, 0, 0}));
    CHECK(row["c"] == 0);
  }
  CHECK(run({"report", temp_file("nothing.net", "vertex a\n")}).code == 1);
}
