#include "periodica/enumerate.hpp"

#include <functional>
#include <map>
#include <numeric>

#include "periodica/canonical.hpp"
#include "periodica/planar_map.hpp"

namespace periodica {

namespace {

// A diagram with nodes and punctures but no arcs, plus what the planarity
// test needs: the rotation of every dart and the map vertex owning it.
struct Frame {
  SquareDiagram d;
  std::vector<int> rot;    // next dart counterclockwise around its map vertex
  std::vector<int> owner;  // map vertex: nodes first, then the boundary
  int vertices = 0;
};

Frame make_frame(int crossings, int markers, int lr, int bt) {
  Frame f;
  for (int i = 0; i < crossings; ++i) f.d.add_node(NodeKind::crossing, 4);
  for (int i = 0; i < markers; ++i) f.d.add_node(NodeKind::marker, 2);
  for (int k = 0; k < lr; ++k) f.d.add_puncture(Side::left, k), f.d.add_puncture(Side::right, k);
  for (int k = 0; k < bt; ++k) f.d.add_puncture(Side::bottom, k), f.d.add_puncture(Side::top, k);
  const int n = f.d.port_count();
  f.rot.assign(n, -1);
  f.owner.assign(n, -1);
  const int nodes = static_cast<int>(f.d.nodes().size());
  for (int v = 0; v < nodes; ++v) {
    const auto& ports = f.d.node(v).ports;
    for (std::size_t i = 0; i < ports.size(); ++i) {
      f.rot[ports[i]] = ports[(i + 1) % ports.size()];
      f.owner[ports[i]] = v;
    }
  }
  f.vertices = nodes;
  // The boundary of the square, seen from outside, is one more vertex whose
  // rotation runs against the counterclockwise order of the punctures.
  std::vector<int> ccw;
  auto edge = [&](Side s, bool increasing) {
    const int count = f.d.puncture_count(s);
    for (int i = 0; i < count; ++i) ccw.push_back(f.d.puncture(f.d.puncture_at(s, increasing ? i : count - 1 - i)).port);
  };
  edge(Side::bottom, true);
  edge(Side::right, true);
  edge(Side::top, false);
  edge(Side::left, false);
  if (!ccw.empty()) {
    for (std::size_t i = 0; i < ccw.size(); ++i) {
      f.rot[ccw[i]] = ccw[(i + ccw.size() - 1) % ccw.size()];
      f.owner[ccw[i]] = nodes;
    }
    ++f.vertices;
  }
  return f;
}

// Euler characteristic 2 on every component.
bool planar(const Frame& f, const std::vector<int>& mate) {
  const int n = static_cast<int>(mate.size());
  std::vector<int> parent(f.vertices);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int p = 0; p < n; ++p) parent[find(f.owner[p])] = find(f.owner[mate[p]]);
  int components = 0;
  for (int v = 0; v < f.vertices; ++v) components += find(v) == v;
  std::vector<char> seen(n, 0);
  int faces = 0;
  for (int p = 0; p < n; ++p) {
    if (seen[p]) continue;
    ++faces;
    for (int x = p; !seen[x]; x = f.rot[mate[x]]) seen[x] = 1;
  }
  return f.vertices - n / 2 + faces == 2 * components;
}

void matchings(const Frame& f, std::vector<int>& mate, const std::function<void()>& leaf) {
  int p = 0;
  while (p < static_cast<int>(mate.size()) && mate[p] >= 0) ++p;
  if (p == static_cast<int>(mate.size())) {
    leaf();
    return;
  }
  for (int q = p + 1; q < static_cast<int>(mate.size()); ++q) {
    if (mate[q] >= 0) continue;
    mate[p] = q, mate[q] = p;
    matchings(f, mate, leaf);
    mate[p] = mate[q] = -1;
  }
}

}  // namespace

std::vector<SquareDiagram> enumerate_shadows(const ShadowBounds& b) {
  std::map<Code, SquareDiagram> out;
  for (int x = 0; x <= b.max_crossings; ++x)
    for (int m = 0; m <= b.max_markers; ++m)
      for (int lr = 0; lr <= b.max_punctures; ++lr)
        for (int bt = 0; lr + bt <= b.max_punctures; ++bt) {
          const int ports = 4 * x + 2 * m + 2 * (lr + bt);
          if (ports == 0 || (b.max_ports >= 0 && ports > b.max_ports)) continue;
          const Frame f = make_frame(x, m, lr, bt);
          std::vector<int> mate(ports, -1);
          matchings(f, mate, [&] {
            if (!planar(f, mate)) return;
            SquareDiagram d = f.d;
            for (int p = 0; p < ports; ++p)
              if (p < mate[p]) d.connect(p, mate[p]);
            auto code = shadow_code(d);
            if (!out.count(code)) out.emplace(std::move(code), std::move(d));
          });
        }
  std::vector<SquareDiagram> v;
  for (auto& [code, d] : out) v.push_back(std::move(d));
  return v;
}

std::vector<SquareDiagram> enumerate_diagrams(const ShadowBounds& b) {
  std::map<Code, SquareDiagram> out;
  for (const auto& s : enumerate_shadows(b)) {
    std::vector<int> xs;
    for (std::size_t i = 0; i < s.nodes().size(); ++i)
      if (s.node(i).kind == NodeKind::crossing) xs.push_back(static_cast<int>(i));
    for (int mask = 0; mask < 1 << xs.size(); ++mask) {
      SquareDiagram d = s;
      for (std::size_t i = 0; i < xs.size(); ++i) d.set_over(xs[i], mask >> i & 1);
      auto code = canonical_code(d);
      if (!out.count(code)) out.emplace(std::move(code), std::move(d));
    }
  }
  std::vector<SquareDiagram> v;
  for (auto& [code, d] : out) v.push_back(std::move(d));
  return v;
}

}  // namespace periodica
