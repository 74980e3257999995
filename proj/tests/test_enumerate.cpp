// Exhaustive shadow generation and the oracle comparison on small bounds.
#include <functional>
#include <set>

#include "doctest.h"
#include "periodica/canonical.hpp"
#include "periodica/enumerate.hpp"
#include "periodica/planar_map.hpp"
#include "periodica/search.hpp"
#include "support.hpp"

using namespace periodica;

namespace {

// Every perfect matching of every frame, kept when validate() accepts it.
std::set<Code> shadows_by_validation(const ShadowBounds& b) {
  std::set<Code> out;
  for (int x = 0; x <= b.max_crossings; ++x)
    for (int m = 0; m <= b.max_markers; ++m)
      for (int lr = 0; lr <= b.max_punctures; ++lr)
        for (int bt = 0; lr + bt <= b.max_punctures; ++bt) {
          const int ports = 4 * x + 2 * m + 2 * (lr + bt);
          if (ports == 0 || ports > b.max_ports) continue;
          SquareDiagram frame;
          for (int i = 0; i < x; ++i) frame.add_node(NodeKind::crossing, 4);
          for (int i = 0; i < m; ++i) frame.add_node(NodeKind::marker, 2);
          for (int k = 0; k < lr; ++k) frame.add_puncture(Side::left, k), frame.add_puncture(Side::right, k);
          for (int k = 0; k < bt; ++k) frame.add_puncture(Side::bottom, k), frame.add_puncture(Side::top, k);
          std::vector<int> free_ports(ports);
          for (int i = 0; i < ports; ++i) free_ports[i] = i;
          std::function<void(SquareDiagram, std::vector<int>)> rec = [&](SquareDiagram d, std::vector<int> left) {
            if (left.empty()) {
              if (validate(d).valid()) out.insert(shadow_code(d));
              return;
            }
            for (std::size_t j = 1; j < left.size(); ++j) {
              SquareDiagram e = d;
              e.connect(left[0], left[j]);
              std::vector<int> rest;
              for (std::size_t k = 1; k < left.size(); ++k)
                if (k != j) rest.push_back(left[k]);
              rec(e, rest);
            }
          };
          rec(frame, free_ports);
        }
  return out;
}

ShadowBounds small(int ports) {
  ShadowBounds b;
  b.max_ports = ports;
  return b;
}

}  // namespace

TEST_CASE("generated shadows match a validate-everything search") {
  for (int ports : {6, 8, 10}) {
    INFO("arc ends " << ports);
    const auto got = enumerate_shadows(small(ports));
    std::set<Code> codes;
    for (const auto& d : got) {
      CHECK(validate(d).valid());
      codes.insert(shadow_code(d));
    }
    CHECK(codes.size() == got.size());
    CHECK(codes == shadows_by_validation(small(ports)));
  }
}

TEST_CASE("diagrams cover every over/under assignment") {
  const auto shadows = enumerate_shadows(small(8));
  const auto diagrams = enumerate_diagrams(small(8));
  std::set<Code> shadow_codes, from_diagrams;
  for (const auto& d : shadows) shadow_codes.insert(shadow_code(d));
  for (const auto& d : diagrams) from_diagrams.insert(shadow_code(d));
  CHECK(shadow_codes == from_diagrams);
  CHECK(diagrams.size() >= shadows.size());
  std::set<Code> codes;
  for (const auto& d : diagrams) codes.insert(canonical_code(d));
  CHECK(codes.size() == diagrams.size());
}

TEST_CASE("batched oracle agrees with the single one") {
  OracleCaps caps;
  caps.max_crossings = 3;
  caps.max_markers = 2;
  caps.max_punctures = 2;
  caps.max_ports = 12;
  const auto ds = enumerate_diagrams(small(8));
  const auto all = brute_oracle_all(ds, caps);
  REQUIRE(all.size() == ds.size());
  for (std::size_t i = 0; i < ds.size(); i += 9) {
    const auto one = brute_oracle(ds[i], caps);
    CHECK(one.min_crossings == all[i].min_crossings);
    CHECK(one.distance == all[i].distance);
    CHECK(one.states == all[i].states);
  }
}

TEST_CASE("layered search equals the oracle on every small diagram") {
  OracleCaps caps;
  caps.max_crossings = 3;
  caps.max_markers = 2;
  caps.max_punctures = 2;
  caps.max_ports = 10;
  UntangleOptions o;
  o.budget.max_crossings = caps.max_crossings;
  o.budget.max_markers = caps.max_markers;
  o.budget.max_punctures = caps.max_punctures;
  o.budget.max_ports = caps.max_ports;
  o.budget.max_states = 1000000;
  o.max_expanded_members = -1;
  o.max_changes = 8;
  UntangleCache cache;
  auto cached = o;
  cached.cache = &cache;
  const auto ds = enumerate_diagrams(small(10));
  const auto oracle = brute_oracle_all(ds, caps);
  int with_changes = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto r = untangle_bfs(ds[i], cached);
    CHECK(r.exhaustive);
    CHECK(r.min_crossings == oracle[i].min_crossings);
    CHECK(r.u_upper == oracle[i].distance);
    with_changes += r.u_upper > 0;
    if (i % 97 == 0) CHECK(to_json(untangle_bfs(ds[i], o)) == to_json(r));
  }
  CHECK(with_changes > 0);
  auto other = o;
  other.budget.max_states = 5;
  other.cache = &cache;
  CHECK_THROWS_AS(untangle_bfs(ds[0], other), std::invalid_argument);
}
