#include "periodica/planar_map.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace periodica {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

// Punctures in counterclockwise order, with gap tokens interleaved. A token is
// either a puncture index (>= 0) or a gap encoded as -(1 + side * 4096 + gap).
std::vector<int> boundary_tokens(const SquareDiagram& d) {
  std::array<std::vector<int>, 4> by_side;
  for (std::size_t k = 0; k < d.punctures().size(); ++k)
    by_side[static_cast<int>(d.puncture(k).side)].push_back(static_cast<int>(k));
  for (auto& v : by_side)
    std::sort(v.begin(), v.end(),
              [&](int a, int b) { return d.puncture(a).slot < d.puncture(b).slot; });
  std::vector<int> tokens;
  const Side order[4] = {Side::bottom, Side::right, Side::top, Side::left};
  for (Side s : order) {
    auto v = by_side[static_cast<int>(s)];
    const int n = static_cast<int>(v.size());
    const int sid = static_cast<int>(s);
    if (ccw_increasing(s)) {
      for (int i = 0; i < n; ++i) {
        tokens.push_back(-(1 + sid * 4096 + i));
        tokens.push_back(v[i]);
      }
      tokens.push_back(-(1 + sid * 4096 + n));
    } else {
      for (int i = n - 1; i >= 0; --i) {
        tokens.push_back(-(1 + sid * 4096 + i + 1));
        tokens.push_back(v[i]);
      }
      tokens.push_back(-(1 + sid * 4096));
    }
  }
  return tokens;
}

}  // namespace

PlanarMap::PlanarMap(const SquareDiagram& d) {
  ports_ = d.port_count();
  const int np = static_cast<int>(d.punctures().size());
  const int total = ports_ + 2 * np;
  mate_.assign(total, -1);
  rot_next_.assign(total, -1);
  rot_prev_.assign(total, -1);
  for (int p = 0; p < ports_; ++p) mate_[p] = d.mate(p);
  for (const auto& n : d.nodes()) {
    const int k = static_cast<int>(n.ports.size());
    for (int i = 0; i < k; ++i) {
      rot_next_[n.ports[i]] = n.ports[(i + 1) % k];
      rot_prev_[n.ports[i]] = n.ports[(i + k - 1) % k];
    }
  }

  const auto tokens = boundary_tokens(d);
  cycle_pos_.assign(np, -1);
  for (int t : tokens)
    if (t >= 0) {
      cycle_pos_[t] = static_cast<int>(cycle_.size());
      cycle_.push_back(t);
    }
  for (int j = 0; j < np; ++j) {
    const int fwd = ports_ + 2 * j;
    const int back = fwd + 1;
    const int next_back = ports_ + 2 * ((j + 1) % np) + 1;
    mate_[fwd] = next_back;
    mate_[next_back] = fwd;
    const int port = d.puncture(cycle_[j]).port;
    // rotation at a puncture: forward boundary dart, arc port, backward dart
    rot_next_[fwd] = port;
    rot_next_[port] = back;
    rot_next_[back] = fwd;
    rot_prev_[port] = fwd;
    rot_prev_[back] = port;
    rot_prev_[fwd] = back;
  }

  face_.assign(total, -1);
  for (int s = 0; s < total; ++s) {
    if (face_[s] >= 0 || mate_[s] < 0) continue;
    const int f = face_count();
    face_darts_.emplace_back();
    int x = s;
    while (face_[x] < 0) {
      face_[x] = f;
      face_darts_[f].push_back(x);
      x = rot_prev_[mate_[x]];
    }
  }

  const int nn = static_cast<int>(d.nodes().size());
  UnionFind uf(nn + np);
  auto vertex_of = [&](int port) {
    const auto& o = d.owner(port);
    return o.puncture ? nn + o.index : o.index;
  };
  for (int p = 0; p < ports_; ++p)
    if (mate_[p] >= 0) uf.join(vertex_of(p), vertex_of(mate_[p]));
  for (int j = 1; j < np; ++j) uf.join(nn + cycle_[0], nn + cycle_[j]);
  component_.assign(nn + np, -1);
  std::map<int, int> ids;
  for (int v = 0; v < nn + np; ++v) {
    auto [it, fresh] = ids.emplace(uf.find(v), static_cast<int>(ids.size()));
    component_[v] = it->second;
  }
  component_count_ = static_cast<int>(ids.size());
  if (np > 0) boundary_component_ = component_[nn + cycle_[0]];

  gap_face_.assign(4, {});
  for (int s = 0; s < 4; ++s) gap_face_[s].assign(d.puncture_count(static_cast<Side>(s)) + 1, -1);
  if (np > 0) {
    // each gap lies on the boundary segment that starts at the previous puncture
    int last = -1;
    for (int t : tokens)
      if (t >= 0) last = t;
    for (int t : tokens) {
      if (t >= 0) {
        last = t;
        continue;
      }
      const int code = -t - 1;
      const int side = code / 4096;
      const int gap = code % 4096;
      if (gap < static_cast<int>(gap_face_[side].size()))
        gap_face_[side][gap] = face_[boundary_dart(cycle_pos_[last])];
    }
  }
}

int PlanarMap::boundary_dart(int pos) const { return ports_ + 2 * pos; }

int PlanarMap::gap_face(Side s, int gap) const {
  const auto& v = gap_face_[static_cast<int>(s)];
  if (gap < 0 || gap >= static_cast<int>(v.size())) return -1;
  return v[gap];
}

bool ValidationReport::valid() const {
  if (!errors.empty()) return false;
  return std::all_of(rules.begin(), rules.end(), [](const RuleResult& r) { return r.ok; });
}

namespace {

std::string node_name(const SquareDiagram& d, int port) {
  const auto& o = d.owner(port);
  if (o.puncture) {
    const auto& p = d.puncture(o.index);
    return std::string("puncture ") + side_char(p.side) + " " + std::to_string(p.slot);
  }
  return "node " + std::to_string(d.node(o.index).id) + " port " + std::to_string(o.position);
}

}  // namespace

ValidationReport validate(const SquareDiagram& d) {
  ValidationReport r;
  for (int p = 0; p < d.port_count(); ++p) {
    const int q = d.mate(p);
    if (q < 0)
      r.errors.push_back("dangling " + node_name(d, p) + ": every port needs exactly one arc");
    else if (d.mate(q) != p)
      r.errors.push_back("inconsistent arc at " + node_name(d, p));
  }
  RuleResult r1{"1", true, ""}, r2{"2", true, ""}, r3{"3", true, ""}, r5{"5", true, ""},
      r6{"6", true, ""}, r8{"8", true, ""};
  for (const auto& n : d.nodes()) {
    const int k = static_cast<int>(n.ports.size());
    if (n.kind == NodeKind::crossing && k != 4) {
      r1.ok = false;
      r1.message = "crossing " + std::to_string(n.id) + " is not a double point";
    }
    if (n.kind == NodeKind::crossing && n.over != 0 && n.over != 1) {
      r2.ok = false;
      r2.message = "crossing " + std::to_string(n.id) + " has no over pair";
    }
    if (n.kind == NodeKind::marker && k != 2) {
      r3.ok = false;
      r3.message = "marker " + std::to_string(n.id) + " must have a dot and a circle";
    }
    if (n.kind == NodeKind::vertex && k == 0) {
      r8.ok = false;
      r8.message = "vertex " + std::to_string(n.id) + " has no edges";
    }
  }

  // punctures: unique slots, pairs across opposite edges, slots 0..n-1
  std::map<std::pair<int, int>, int> seen;
  for (const auto& p : d.punctures()) {
    if (++seen[{static_cast<int>(p.side), p.slot}] == 2) {
      r5.ok = false;
      r5.message = std::string("two punctures share slot ") + side_char(p.side) + " " +
                   std::to_string(p.slot);
    }
  }
  for (Side s : {Side::left, Side::bottom}) {
    const int n = d.puncture_count(s);
    if (n != d.puncture_count(opposite(s))) {
      r.errors.push_back(std::string("unpaired puncture: edges ") + side_char(s) + " and " +
                         side_char(opposite(s)) + " have different puncture counts");
      continue;
    }
    for (const auto& p : d.punctures()) {
      if (p.side != s && p.side != opposite(s)) continue;
      if (p.slot >= n) {
        r6.ok = false;
        r6.message = std::string("slot ") + std::to_string(p.slot) + " on edge " +
                     side_char(p.side) + " is outside 0.." + std::to_string(n - 1);
      } else if (d.puncture_at(opposite(p.side), p.slot) < 0) {
        r.errors.push_back(std::string("unpaired puncture ") + side_char(p.side) + " " +
                           std::to_string(p.slot));
      }
    }
  }
  r.rules = {r1, r2, r3, {"4", true, ""}, r5, r6, {"7", true, ""}, r8, {"9", true, ""}};
  if (!r.errors.empty() || !r5.ok || !r6.ok) return r;

  PlanarMap m(d);
  const int nn = static_cast<int>(d.nodes().size());
  std::vector<int> V(m.component_count()), E(m.component_count()), F(m.component_count());
  for (int v = 0; v < nn + static_cast<int>(d.punctures().size()); ++v) V[m.component(v)]++;
  auto comp_of_dart = [&](int dart) {
    if (dart >= d.port_count()) return m.boundary_component();
    const auto& o = d.owner(dart);
    return m.component(o.puncture ? nn + o.index : o.index);
  };
  for (int x = 0; x < m.darts(); ++x) E[comp_of_dart(x)]++;
  for (int f = 0; f < m.face_count(); ++f) F[comp_of_dart(m.face_darts(f)[0])]++;
  RuleResult euler{"euler", true, ""};
  for (int c = 0; c < m.component_count(); ++c) {
    const int chi = V[c] - E[c] / 2 + F[c];
    if (chi != 2) {
      euler.ok = false;
      euler.message = "component " + std::to_string(c) + " has Euler characteristic " +
                      std::to_string(chi) + ", the rotation system is not planar";
    }
  }
  r.rules.push_back(euler);
  return r;
}

void require_valid(const SquareDiagram& d) {
  const auto r = validate(d);
  if (!r.errors.empty()) throw PreconditionError("invalid diagram: " + r.errors.front());
  for (const auto& rule : r.rules)
    if (!rule.ok) throw PreconditionError("invalid diagram: rule " + rule.rule + ": " + rule.message);
}

}  // namespace periodica
