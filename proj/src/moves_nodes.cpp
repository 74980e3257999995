// Moves around a node: R4 and R10 slide a strand across a marker or a vertex,
// R11 twists two neighbouring vertex edges, R12 pushes a vertex through the
// front or back face.
#include "moves_common.hpp"

namespace periodica::detail {

namespace {

// The strand B that crosses the run S of ports of v, seen from v: each S port
// meets B at a crossing X_j entered at position x_j; B runs from the left end
// X_0.(x_0+1) to the right end X_{m-1}.(x_{m-1}+3).
struct Run {
  bool ok = false;
  std::vector<int> x, at;
  int left = -1, right = -1;
};

Run run_across(const SquareDiagram& d, int v, int i, int m) {
  Run r;
  const auto& ports = d.node(v).ports;
  const int deg = static_cast<int>(ports.size());
  for (int j = 0; j < m; ++j) {
    const int q = d.mate(ports[(i + j) % deg]);
    const auto& o = d.owner(q);
    if (o.puncture || d.node(o.index).kind != NodeKind::crossing || o.index == v) return r;
    for (int y : r.x)
      if (y == o.index) return r;
    r.x.push_back(o.index);
    r.at.push_back(o.position);
  }
  auto X = [&](int j, int k) { return d.node(r.x[j]).ports[(r.at[j] + k) % 4]; };
  for (int j = 0; j + 1 < m; ++j)
    if (d.mate(X(j, 3)) != X(j + 1, 1)) return r;
  r.left = X(0, 1);
  r.right = X(m - 1, 3);
  r.ok = true;
  return r;
}

}  // namespace

void enum_slide(const Ctx& c, const MoveFilter& f, std::vector<MoveApplication>& out, MoveKind kind) {
  const auto& d = c.d;
  const bool marker = kind == MoveKind::R4;
  for (int v = 0; v < c.nodes; ++v) {
    if (!c.is(v, marker ? NodeKind::marker : NodeKind::vertex)) continue;
    const int deg = c.arity(v);
    if (deg == 0) continue;
    bool loops = false;
    for (int j = 0; j < deg; ++j) loops = loops || c.node_of(d.mate(c.port(v, j))) == v;
    for (int i = 0; i < deg; ++i)
      for (int m = marker ? 2 : 1; m <= deg; ++m) {
        const Run r = run_across(d, v, i, m);
        if (!r.ok) continue;
        bool ok = true;
        for (int j = 0; j < m && ok; ++j) {
          const bool b_over = d.is_over(r.x[j], r.at[j] + 1);
          if (marker)
            ok = b_over == (c.pos(c.port(v, i + j)) == kCircle);
          else
            ok = b_over == d.is_over(r.x[0], r.at[0] + 1);
        }
        if (!ok) continue;
        auto in_pattern = [&](int p) {
          const int n = c.node_of(p);
          if (n == v) return true;
          for (int y : r.x)
            if (y == n) return true;
          return false;
        };
        const int ml = d.mate(r.left), mr = d.mate(r.right);
        if (!(ml == r.right) && (in_pattern(ml) || in_pattern(mr))) continue;
        for (int j = 0; j < m && ok; ++j)
          ok = !in_pattern(d.mate(d.node(r.x[j]).ports[(r.at[j] + 2) % 4]));
        for (int j = m; j < deg && ok; ++j) ok = !in_pattern(d.mate(c.port(v, i + j)));
        if (!ok) continue;
        const int delta = (deg - m) - m;
        offer(c, f, out,
              {kind, delta <= 0 ? Direction::forward : Direction::backward, {v, i, m, -1}, 0,
               delta, 0, 0});
      }
    if (loops) continue;
    // the strand of a nearby arc slides across the node from the corner at i
    const int cv = c.comp_of_port(c.port(v, 0));
    for (int i = 0; i < deg; ++i) {
      const int face = c.map.corner_face(c.port(v, i));
      for (int b = 0; b < d.port_count(); ++b) {
        if (c.node_of(b) == v || c.node_of(d.mate(b)) == v) continue;
        const int cb = c.comp_of_port(b);
        if (c.map.face(b) != face && !(cb != cv && (c.floating(cb) || c.floating(cv)))) continue;
        for (int level = 0; level < (marker ? 1 : 2); ++level)
          offer(c, f, out, {kind, Direction::backward, {v, i, 0, b}, level, deg, 0, 0});
      }
    }
  }
}

SquareDiagram apply_slide(const SquareDiagram& d, const MoveApplication& mv) {
  const int v = mv.site[0], i = mv.site[1], m = mv.site[2];
  const bool marker = mv.kind == MoveKind::R4;
  const auto& ports = d.node(v).ports;
  const int deg = static_cast<int>(ports.size());
  auto vp = [&](int j) { return ports[(i + j) % deg]; };
  Rewriter w(d);
  Run r;
  bool b_over = mv.variant == 1;
  if (m > 0) {
    r = run_across(d, v, i, m);
    if (!r.ok) throw PreconditionError("slide: no strand across the run");
    b_over = d.is_over(r.x[0], r.at[0] + 1);
  }
  // New crossings on the remaining edges, ports ordered [to v, right, away, left].
  const int c = deg - m;
  std::vector<int> y(c);
  for (int j = 0; j < c; ++j) {
    const bool over = marker ? d.owner(vp(m + j)).position == kCircle : b_over;
    y[j] = w.add_node(NodeKind::crossing, 4, over ? 1 : 0);
  }
  for (int j = 0; j < c; ++j) {
    const int p = vp(m + j);
    const int o = d.mate(p);
    w.link(p, w.port(y[j], 0));
    w.link(w.port(y[j], 2), o);
    if (j > 0) w.link(w.port(y[j], 1), w.port(y[j - 1], 3));
  }
  if (m > 0) {
    for (int j = 0; j < m; ++j) {
      const auto& xp = d.node(r.x[j]).ports;
      w.kill_node(r.x[j]);
      w.through(xp[r.at[j]], xp[(r.at[j] + 2) % 4]);
    }
    if (c > 0) {
      w.substitute(r.left, w.port(y[c - 1], 3));
      w.substitute(r.right, w.port(y[0], 1));
    } else {
      w.through(r.left, r.right);
    }
  } else {
    const int p = mv.site[3], q = d.mate(p);
    w.link(p, w.port(y[c - 1], 3));
    w.link(w.port(y[0], 1), q);
  }
  return w.finish();
}

void enum_r11(const Ctx& c, const MoveFilter& f, std::vector<MoveApplication>& out) {
  const auto& d = c.d;
  for (int v = 0; v < c.nodes; ++v) {
    if (!c.is(v, NodeKind::vertex) || c.arity(v) < 2) continue;
    const int deg = c.arity(v);
    for (int a = 0; a < deg; ++a) {
      const int p = c.port(v, a), p2 = c.port(v, a + 1);
      const int x = c.node_of(d.mate(p));
      if (!c.is(x, NodeKind::crossing) || c.node_of(d.mate(p2)) != x) continue;
      const int xa = c.pos(d.mate(p)), xb = c.pos(d.mate(p2));
      if (xb != (xa + 3) % 4) continue;
      if (d.mate(c.port(x, xa + 2)) == c.port(x, xb + 2)) continue;
      offer(c, f, out, {MoveKind::R11, Direction::forward, {v, a}, 0, -1, 0, 0});
    }
    for (int a = 0; a < deg; ++a) {
      if (d.mate(c.port(v, a)) == c.port(v, a + 1)) continue;
      for (int over = 0; over < 2; ++over)
        offer(c, f, out, {MoveKind::R11, Direction::backward, {v, a}, over, 1, 0, 0});
    }
  }
}

SquareDiagram apply_r11(const SquareDiagram& d, const MoveApplication& m) {
  const int v = m.site[0], a = m.site[1];
  const auto& ports = d.node(v).ports;
  const int deg = static_cast<int>(ports.size());
  const int p = ports[a % deg], p2 = ports[(a + 1) % deg];
  Rewriter w(d);
  if (m.direction == Direction::forward) {
    const int x = d.owner(d.mate(p)).index;
    const int xa = d.owner(d.mate(p)).position, xb = d.owner(d.mate(p2)).position;
    w.kill_node(x);
    w.substitute(w.port(x, (xb + 2) % 4), p);
    w.substitute(w.port(x, (xa + 2) % 4), p2);
    return w.finish();
  }
  const int A = d.mate(p), B = d.mate(p2);
  const int x = w.add_node(NodeKind::crossing, 4, m.variant);
  w.link(w.port(x, 0), p);
  w.link(w.port(x, 3), p2);
  w.link(w.port(x, 1), A);
  w.link(w.port(x, 2), B);
  return w.finish();
}

namespace {

// Ports of v whose arc meets a marker on the given side first.
std::vector<int> facing_ports(const SquareDiagram& d, int v, int facing) {
  std::vector<int> out;
  const auto& ports = d.node(v).ports;
  for (std::size_t j = 0; j < ports.size(); ++j) {
    const auto& o = d.owner(d.mate(ports[j]));
    if (!o.puncture && d.node(o.index).kind == NodeKind::marker && o.position == facing)
      out.push_back(static_cast<int>(j));
  }
  return out;
}

constexpr int kMaxFacing = 6;

}  // namespace

void enum_r12(const Ctx& c, const MoveFilter& f, std::vector<MoveApplication>& out) {
  const auto& d = c.d;
  for (int v = 0; v < c.nodes; ++v) {
    if (!c.is(v, NodeKind::vertex)) continue;
    const int deg = c.arity(v);
    bool ok = true;
    for (int j = 0; j < deg && ok; ++j) {
      const int o = d.mate(c.port(v, j));
      const int n = c.node_of(o);
      if (n == v) ok = false;
      if (c.is(n, NodeKind::marker) && c.node_of(d.mate(c.port(n, 1 - c.pos(o)))) == v) ok = false;
    }
    if (!ok) continue;
    for (int dir = 0; dir < 2; ++dir) {
      const auto fp = facing_ports(d, v, dir == 0 ? kDot : kCircle);
      const int k = static_cast<int>(fp.size());
      // Each facing marker is either absorbed or kept with a new marker
      // beside it; the variant's bits pick the absorbed ones.
      const int full = (1 << k) - 1;
      for (int mask = k > kMaxFacing ? full : 0; mask <= full; ++mask) {
        const int s = __builtin_popcount(static_cast<unsigned>(mask));
        const int delta = (deg - s) - s;
        offer(c, f, out,
              {MoveKind::R12, delta <= 0 ? Direction::forward : Direction::backward, {v, dir},
               mask, 0, delta, 0});
      }
    }
  }
}

SquareDiagram apply_r12(const SquareDiagram& d, const MoveApplication& m) {
  const int v = m.site[0], dir = m.site[1];
  const int facing = dir == 0 ? kDot : kCircle;
  const auto fp = facing_ports(d, v, facing);
  std::vector<char> absorb(d.node(v).ports.size(), 0);
  for (std::size_t b = 0; b < fp.size(); ++b)
    if (m.variant >> b & 1) absorb[fp[b]] = 1;
  Rewriter w(d);
  const auto& ports = d.node(v).ports;
  for (std::size_t j = 0; j < ports.size(); ++j) {
    const int p = ports[j];
    const int o = d.mate(p);
    if (absorb[j]) {
      const int n = d.owner(o).index;
      w.kill_node(n);
      w.through(w.port(n, kDot), w.port(n, kCircle));
    } else {
      // after passing, the edge leaves v through the opposite face
      const int nm = w.add_node(NodeKind::marker, 2);
      w.link(p, w.port(nm, 1 - facing));
      w.link(w.port(nm, facing), o);
    }
  }
  return w.finish();
}

}  // namespace periodica::detail
