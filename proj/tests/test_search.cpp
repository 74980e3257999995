// Simplification, untangling and the brute-force oracle.
#include <random>

#include "doctest.h"
#include "periodica/canonical.hpp"
#include "periodica/search.hpp"
#include "support.hpp"

using namespace periodica;
using support::fixture;

namespace {

// One strand through a single crossing: a kink.
SquareDiagram curl() { return parse_diagram("pdg 1\nX 1 a0 a1 a2 a3 over=02\nA a0 a1\nA a2 a3\n"); }

SimplifyBudget tight(int threads = 1) {
  SimplifyBudget b;
  b.max_crossings = 3;
  b.max_markers = 2;
  b.max_punctures = 2;
  b.max_ports = 16;
  b.threads = threads;
  return b;
}

UntangleOptions exact(int threads = 1) {
  UntangleOptions o;
  o.budget = tight(threads);
  o.budget.max_states = 200000;
  o.max_expanded_members = -1;
  o.max_changes = 8;
  return o;
}

OracleCaps oracle_caps() {
  OracleCaps c;
  c.max_crossings = 3;
  c.max_markers = 2;
  c.max_punctures = 2;
  c.max_ports = 16;
  return c;
}

// Random small diagrams with a few crossings flipped at random.
std::vector<SquareDiagram> tangles(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  MoveFilter caps;
  caps.max_crossings = 3;
  caps.max_markers = 2;
  caps.max_punctures = 2;
  caps.max_ports = 16;
  std::vector<SquareDiagram> out;
  while (static_cast<int>(out.size()) < n) {
    auto d = support::random_diagram(rng, 12, caps);
    for (std::size_t i = 0; i < d.nodes().size(); ++i)
      if (d.node(i).kind == NodeKind::crossing && rng() % 2) d = change_crossing(d, static_cast<int>(i));
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

TEST_CASE("a kink simplifies to a free loop") {
  const auto s = simplify(curl());
  CHECK(s.crossings() == 0);
  CHECK(s.nodes().empty());
  CHECK(s.free_loops() == 1);
}

TEST_CASE("simplify never adds crossings and is idempotent") {
  auto cases = support::seeds();
  for (auto& d : tangles(30, 11)) cases.push_back(std::move(d));
  for (const auto& d : cases) {
    const auto s = simplify(d, tight());
    CHECK(s.crossings() <= d.crossings());
    CHECK(validate(s).valid());
    CHECK(canonical_code(simplify(s, tight())) == canonical_code(s));
  }
}

TEST_CASE("explored closures are closed under the moves") {
  const auto c = explore(fixture("thread-ring.pdg"), tight());
  REQUIRE(c.exhaustive);
  std::set<Code> codes;
  for (const auto& m : c.members) codes.insert(m.code);
  MoveFilter f = tight().caps_for(c.members[0].diagram);
  for (const auto& m : c.members)
    for (const auto& mv : enumerate_moves(m.diagram, f)) CHECK(codes.count(canonical_code(apply_enumerated(m.diagram, mv))));
  // every member is reached by replaying its path from the root
  for (int i = 0; i < static_cast<int>(c.members.size()); i += 7) {
    SquareDiagram d = c.members[0].diagram;
    for (const auto& mv : path_to(c, i)) d = apply_move(d, mv);
    CHECK(canonical_code(d) == c.members[i].code);
  }
}

TEST_CASE("a diagram without crossings is a ground state") {
  for (const char* name : {"thread.pdg"}) {
    const auto r = untangle_bfs(fixture(name));
    CHECK(r.u_upper == 0);
    CHECK(r.min_crossings == 0);
    CHECK(r.exhaustive);
    CHECK(r.witness.empty());
  }
  CHECK(untangle_fixed_shadow(fixture("thread.pdg")).u_upper == 0);
  CHECK(is_ground_state(simplify(curl())).ground);
}

TEST_CASE("the Hopf link comes apart after one change") {
  const auto hopf = fixture("hopf.pdg");
  CHECK(simplify(hopf).crossings() == 2);
  CHECK(simplify(fixture("unlink-bigon.pdg")).crossings() == 0);

  const auto bfs = untangle_bfs(hopf);
  CHECK(bfs.u_upper == 1);
  CHECK(bfs.min_crossings == 0);
  CHECK(bfs.start_crossings == 2);
  CHECK(bfs.exhaustive);
  REQUIRE(bfs.witness.size() == 1);
  CHECK(canonical_code(replay(hopf, bfs)) == bfs.terminal_code);

  const auto fixed = untangle_fixed_shadow(hopf);
  CHECK(fixed.u_upper == 1);
  CHECK(fixed.min_crossings == 0);
  CHECK(canonical_code(replay(hopf, fixed)) == fixed.terminal_code);

  const auto oracle = brute_oracle(hopf, oracle_caps());
  CHECK(oracle.min_crossings == 0);
  CHECK(oracle.distance == 1);
  CHECK_FALSE(is_ground_state(hopf).ground);
}

TEST_CASE("the crossing floor") {
  CHECK(crossing_lower_bound(fixture("hopf.pdg")) == 0);
  CHECK(crossing_lower_bound(fixture("thread-ring.pdg")) == 0);
  // a vertical thread over a horizontal one cross once whatever is done to them
  const auto grid = parse_diagram(
      "pdg 1\nX 1 a0 a1 a2 a3 over=02\nP L 0 l\nP R 0 r\nP B 0 b\nP T 0 t\nA l a2\nA a0 r\nA b a3\nA a1 t\n");
  REQUIRE(validate(grid).valid());
  CHECK(crossing_lower_bound(grid) == 1);
  const auto r = untangle_bfs(grid);
  CHECK(r.min_crossings == 1);
  CHECK(r.u_upper == 0);
  CHECK(r.exhaustive);
}

TEST_CASE("layered search agrees with the oracle") {
  for (const auto& d : tangles(12, 5)) {
    const auto r = untangle_bfs(d, exact());
    const auto o = brute_oracle(d, oracle_caps());
    INFO(to_pdg(d));
    CHECK(r.exhaustive);
    CHECK(r.min_crossings == o.min_crossings);
    CHECK(r.u_upper == o.distance);
    CHECK(canonical_code(replay(d, r, exact().budget)) == r.terminal_code);
  }
}

TEST_CASE("more changes never make the result worse") {
  // u_upper itself can grow when a later layer finds fewer crossings, so the
  // pair (least crossings, u_upper) is compared lexicographically
  for (const auto& d : tangles(6, 9)) {
    std::pair<int, int> prev{1 << 20, 0};
    for (int k = 0; k <= 3; ++k) {
      auto o = exact();
      o.max_changes = k;
      const auto r = untangle_bfs(d, o);
      const std::pair<int, int> now{r.min_crossings, r.u_upper};
      CHECK(now <= prev);
      prev = now;
    }
  }
}

TEST_CASE("one crossing change moves the untangling number by at most one") {
  for (const auto& d : tangles(6, 21)) {
    const auto a = brute_oracle(d, oracle_caps());
    for (std::size_t i = 0; i < d.nodes().size(); ++i) {
      if (d.node(i).kind != NodeKind::crossing) continue;
      const auto b = brute_oracle(change_crossing(d, static_cast<int>(i)), oracle_caps());
      CHECK(a.min_crossings == b.min_crossings);
      CHECK(std::abs(a.distance - b.distance) <= 1);
    }
  }
}

TEST_CASE("results do not depend on the thread count") {
  for (const auto& d : tangles(4, 3)) {
    CHECK(to_json(untangle_bfs(d, exact(1))) == to_json(untangle_bfs(d, exact(3))));
    CHECK(canonical_code(simplify(d, tight(1))) == canonical_code(simplify(d, tight(4))));
    CHECK(to_json(untangle_fixed_shadow(d, tight(1))) == to_json(untangle_fixed_shadow(d, tight(3))));
  }
}

TEST_CASE("budgets") {
  auto o = exact();
  o.max_changes = 0;
  const auto r = untangle_bfs(fixture("hopf.pdg"), o);
  CHECK(r.u_upper == 0);
  CHECK_FALSE(r.exhaustive);

  SimplifyBudget small;
  small.max_states = 3;
  CHECK_FALSE(explore(fixture("thread-ring.pdg"), small).exhaustive);

  std::atomic<bool> stop{true};
  o = exact();
  o.cancel = &stop;
  CHECK_FALSE(untangle_bfs(fixture("hopf.pdg"), o).exhaustive);

  CHECK_THROWS_AS(untangle_fixed_shadow(fixture("hopf.pdg"), {}, 1), BudgetError);
  OracleCaps tiny = oracle_caps();
  tiny.max_states = 2;
  CHECK_THROWS_AS(brute_oracle(fixture("hopf.pdg"), tiny), BudgetError);
}

TEST_CASE("json round trips") {
  const auto d = fixture("thread-ring.pdg");
  for (const auto& m : enumerate_moves(d, tight().caps_for(d))) {
    const auto back = move_from_json(to_json(m));
    CHECK(canonical_code(apply_move(d, back)) == canonical_code(apply_enumerated(d, m)));
  }
  CHECK_THROWS(move_from_json({{"kind", "R99"}, {"direction", "forward"}, {"site", {1}}}));
  const auto j = to_json(untangle_bfs(fixture("hopf.pdg")));
  CHECK(j.at("u_upper") == 1);
  CHECK(j.at("witness").size() == 1);
}
