#include <algorithm>
#include <random>

#include "doctest.h"
#include "periodica/canonical.hpp"
#include "periodica/planar_map.hpp"
#include "periodica/strands.hpp"
#include "periodica/text_format.hpp"
#include "periodica/tridiagram.hpp"

using namespace periodica;

namespace {

std::string fixture(const std::string& name) {
  return read_file(std::string(PERIODICA_DATA_DIR) + "/fixtures/" + name);
}

bool has_failed_rule(const ValidationReport& r, const std::string& rule) {
  return std::any_of(r.rules.begin(), r.rules.end(),
                     [&](const RuleResult& x) { return x.rule == rule && !x.ok; });
}

}  // namespace

TEST_CASE("pdg round trip is byte exact after one normalisation") {
  for (const char* name : {"hopf.pdg", "thread.pdg", "thread-ring.pdg", "unlink-bigon.pdg"}) {
    const auto d = parse_diagram(fixture(name));
    const auto once = to_pdg(d);
    CHECK(to_pdg(parse_diagram(once)) == once);
  }
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_diagram("pdg 1\nX 1 a b c over=02\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 11);
  }
  CHECK_THROWS_AS(parse_diagram("pdg 2\n"), ParseError);
  CHECK_THROWS_AS(parse_diagram("pdg 1\nA a b\n"), ParseError);
  CHECK_THROWS_AS(parse_diagram("pdg 1\nP Q 0 a\n"), ParseError);
  CHECK_THROWS_AS(parse_diagram("pdg 1\nV 1 a b\nV 1 c\n"), ParseError);
  CHECK_THROWS_AS(parse_diagram("pdg 1\nV 1 a b\nA a b\nA a b\n"), ParseError);
  CHECK_THROWS_AS(parse_diagram("pdg 1\nX 1 a b c d over=12\n"), ParseError);
}

TEST_CASE("fixtures validate") {
  for (const char* name : {"hopf.pdg", "thread.pdg", "thread-ring.pdg", "unlink-bigon.pdg"}) {
    INFO(name);
    CHECK(validate(parse_diagram(fixture(name))).valid());
  }
}

TEST_CASE("two punctures in one slot break rule 5") {
  const auto d = parse_diagram(
      "pdg 1\nX 1 a b c d over=02\nP L 0 p\nP L 0 q\nP R 0 r\nP R 0 s\nA a p\nA c r\nA b q\nA d s\n");
  const auto r = validate(d);
  CHECK_FALSE(r.valid());
  CHECK(has_failed_rule(r, "5"));
}

TEST_CASE("structural errors are reported") {
  SUBCASE("dangling port") {
    const auto r = validate(parse_diagram("pdg 1\nV 1 a b\nV 2 c\nA a c\n"));
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].find("dangling") != std::string::npos);
  }
  SUBCASE("unpaired puncture") {
    const auto r = validate(parse_diagram("pdg 1\nV 1 a\nP L 0 p\nA a p\n"));
    CHECK_FALSE(r.errors.empty());
  }
  SUBCASE("non planar rotation") {
    const auto r = validate(parse_diagram("pdg 1\nX 1 a b c d over=02\nA a c\nA b d\n"));
    CHECK(r.errors.empty());
    CHECK(has_failed_rule(r, "euler"));
  }
  SUBCASE("slots beyond the pairing") {
    const auto r = validate(parse_diagram("pdg 1\nP L 1 a\nP R 1 b\nA a b\n"));
    CHECK(has_failed_rule(r, "6"));
  }
}

TEST_CASE("planar map of a thread has two faces inside the square") {
  const auto d = parse_diagram(fixture("thread.pdg"));
  PlanarMap m(d);
  CHECK(m.face_count() == 3);  // outer face plus the two halves of the square
  CHECK(m.boundary_cycle().size() == 2);
  CHECK(m.gap_face(Side::bottom, 0) != m.gap_face(Side::top, 0));
  CHECK(m.gap_face(Side::left, 0) == m.gap_face(Side::bottom, 0));
  CHECK(m.gap_face(Side::left, 1) == m.gap_face(Side::top, 0));
}

TEST_CASE("canonical code ignores names, ids and line order") {
  const auto a = parse_diagram(fixture("thread-ring.pdg"));
  const auto b = parse_diagram(
      "pdg 1\nP R 0 rr\nX 17 q0 q1 q2 q3 over=13\nX 3 w0 w1 w2 w3 over=02\nP L 0 ll\n"
      "A q3 w3\nA w1 q1\nA q0 rr\nA ll w2\nA q2 w0\n");
  CHECK(canonical_code(a) == canonical_code(b));
  // rotating a crossing's port list by one flips which pair is written as over
  const auto c = parse_diagram(
      "pdg 1\nP R 0 rr\nX 17 q1 q2 q3 q0 over=02\nX 3 w0 w1 w2 w3 over=02\nP L 0 ll\n"
      "A q3 w3\nA w1 q1\nA q0 rr\nA ll w2\nA q2 w0\n");
  CHECK(canonical_code(a) == canonical_code(c));
}

TEST_CASE("canonical code separates over information and mirror images") {
  const auto hopf = parse_diagram(fixture("hopf.pdg"));
  const auto bigon = parse_diagram(fixture("unlink-bigon.pdg"));
  CHECK(canonical_code(hopf) != canonical_code(bigon));
  CHECK(shadow_code(hopf) == shadow_code(bigon));
  const auto tr = parse_diagram(fixture("thread-ring.pdg"));
  auto flipped = tr;
  flipped.set_over(0, 1);
  flipped.set_over(1, 0);
  // the thread-ring with both crossings changed is its mirror, a different diagram
  CHECK(canonical_code(flipped) != canonical_code(tr));
}

TEST_CASE("canonical code is stable under random relabelling") {
  const auto base = parse_diagram(fixture("thread-ring.pdg"));
  const auto code = canonical_code(base);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    // rebuild with shuffled node order and rotated port lists
    std::vector<int> order(base.nodes().size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::shuffle(order.begin(), order.end(), rng);
    SquareDiagram d;
    std::vector<int> port_map(base.port_count(), -1);
    for (int n : order) {
      const auto& node = base.node(n);
      const int k = static_cast<int>(node.ports.size());
      const int rot = node.kind == NodeKind::crossing ? static_cast<int>(rng() % 4) : 0;
      const int m = d.add_node(node.kind, k, static_cast<int>(rng() % 1000) * 10 + n);
      for (int i = 0; i < k; ++i) port_map[node.ports[(i + rot) % k]] = d.node(m).ports[i];
      d.set_over(m, (node.over + rot) % 2);
    }
    for (const auto& p : base.punctures()) port_map[p.port] = d.puncture(d.add_puncture(p.side, p.slot)).port;
    for (int p = 0; p < base.port_count(); ++p)
      if (base.mate(p) > p) d.connect(port_map[p], port_map[base.mate(p)]);
    CHECK(canonical_code(d) == code);
  }
}

TEST_CASE("closed strand classes") {
  auto thread = parse_diagram(fixture("thread.pdg"));
  CHECK(closed_strand_classes(thread) == std::vector<Vec3>{{1, 0, 0}});
  const auto tr = parse_diagram(fixture("thread-ring.pdg"));
  CHECK(closed_strand_classes(tr) == std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}});
  const auto m = parse_diagram("pdg 1\nM 1 d c\nA d c\n");
  CHECK(closed_strand_classes(m) == std::vector<Vec3>{{0, 0, 1}});
  // the same diagram read as the projection along axis 1 maps depth to x
  auto m1 = m;
  m1.set_axis(1);
  CHECK(closed_strand_classes(m1) == std::vector<Vec3>{{1, 0, 0}});
}

TEST_CASE("tridiagram sections parse and check") {
  const std::string text =
      "pdg 1\n--- diagram 1\nM 1 d c\nA d c\n"
      "--- diagram 2\nP B 0 b\nP T 0 t\nA b t\n"
      "--- diagram 3\nP L 0 l\nP R 0 r\nA l r\n";
  const auto t = parse_tridiagram(text);
  CHECK(triplet(t) == Triplet{0, 0, 0});
  CHECK(check_tridiagram(t).valid());
  CHECK(to_pdg(parse_tridiagram(to_pdg(t))) == to_pdg(t));
  CHECK_THROWS_AS(parse_tridiagram("pdg 1\n--- diagram 1\n--- diagram 3\n"), ParseError);
  auto bad = t;
  bad.diagrams[1] = parse_diagram("pdg 1\n");
  CHECK_FALSE(check_tridiagram(bad).valid());
}
