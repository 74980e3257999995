#include "periodica/strands.hpp"

#include <algorithm>

namespace periodica {

namespace {

// Follows the strand leaving `start`. Returns false when it stops at a vertex.
bool walk(const SquareDiagram& d, int start, std::vector<char>& seen, Strand& s) {
  int cur = start;
  while (true) {
    s.ports.push_back(cur);
    seen[cur] = 1;
    const int q = d.mate(cur);
    if (q < 0) return false;
    seen[q] = 1;
    const auto& o = d.owner(q);
    if (o.puncture) {
      const auto& p = d.puncture(o.index);
      switch (p.side) {
        case Side::right: s.displacement[0] += 1; break;
        case Side::left: s.displacement[0] -= 1; break;
        case Side::top: s.displacement[1] += 1; break;
        case Side::bottom: s.displacement[1] -= 1; break;
      }
      const int other = d.partner(o.index);
      if (other < 0) return false;
      cur = d.puncture(other).port;
    } else {
      const auto& n = d.node(o.index);
      if (n.kind == NodeKind::vertex) {
        s.end_node = o.index;
        return false;
      }
      if (n.kind == NodeKind::marker) {
        s.displacement[2] += o.position == kDot ? 1 : -1;
        cur = n.ports[1 - o.position];
      } else {
        cur = n.ports[(o.position + 2) % 4];
      }
    }
    if (cur == start) return true;
  }
}

}  // namespace

std::vector<Strand> strands(const SquareDiagram& d) {
  std::vector<Strand> out;
  std::vector<char> seen(d.port_count(), 0);
  for (std::size_t n = 0; n < d.nodes().size(); ++n) {
    const auto& node = d.node(n);
    if (node.kind != NodeKind::vertex) continue;
    for (int p : node.ports) {
      if (seen[p]) continue;
      Strand s;
      s.start_node = static_cast<int>(n);
      walk(d, p, seen, s);
      out.push_back(std::move(s));
    }
  }
  for (int p = 0; p < d.port_count(); ++p) {
    if (seen[p]) continue;
    Strand s;
    s.closed = walk(d, p, seen, s);
    out.push_back(std::move(s));
  }
  for (int i = 0; i < d.free_loops(); ++i) {
    Strand s;
    s.closed = true;
    out.push_back(s);
  }
  return out;
}

Vec3 normalise_sign(Vec3 v) {
  for (int c : v) {
    if (c > 0) return v;
    if (c < 0) return {-v[0], -v[1], -v[2]};
  }
  return v;
}

Vec3 to_cell_axes(const Vec3& v, int axis) {
  switch (axis) {
    case 1: return {v[2], v[0], v[1]};
    case 2: return {v[1], v[2], v[0]};
    default: return v;
  }
}

std::vector<Vec3> closed_strand_classes(const SquareDiagram& d) {
  std::vector<Vec3> out;
  for (const auto& s : strands(d))
    if (s.closed) out.push_back(normalise_sign(to_cell_axes(s.displacement, d.axis())));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace periodica
