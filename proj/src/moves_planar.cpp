// R1 curls, R2 bigons and R3 triangles.
#include "moves_common.hpp"

namespace periodica::detail {

void enum_r1(const Ctx& c, const MoveFilter& f, std::vector<MoveApplication>& out) {
  for (int n = 0; n < c.nodes; ++n) {
    if (!c.is(n, NodeKind::crossing)) continue;
    for (int i = 0; i < 4; ++i)
      if (c.d.mate(c.port(n, i)) == c.port(n, i + 1))
        offer(c, f, out, {MoveKind::R1, Direction::forward, {n, i}, 0, -1, 0, 0});
  }
  // a curl on the left of each arc end, in both crossing senses
  for (int p = 0; p < c.d.port_count(); ++p)
    for (int over = 0; over < 2; ++over)
      offer(c, f, out, {MoveKind::R1, Direction::backward, {p}, over, 1, 0, 0});
  if (c.d.free_loops() > 0)
    for (int over = 0; over < 2; ++over)
      offer(c, f, out, {MoveKind::R1, Direction::backward, {-1}, over, 1, 0, 0});
}

SquareDiagram apply_r1(const SquareDiagram& d, const MoveApplication& m) {
  Rewriter w(d);
  if (m.direction == Direction::forward) {
    const int n = m.site[0];
    w.kill_node(n);
    w.through(w.port(n, 0), w.port(n, 2));
    w.through(w.port(n, 1), w.port(n, 3));
    return w.finish();
  }
  // Ports 0 and 1 carry the loop, 2 faces the arc's start and 3 its end.
  const int x = w.add_node(NodeKind::crossing, 4, m.variant);
  w.link(w.port(x, 0), w.port(x, 1));
  if (m.site[0] < 0) {
    w.link(w.port(x, 2), w.port(x, 3));
    w.add_free_loops(-1);
  } else {
    const int p = m.site[0];
    const int q = d.mate(p);
    w.link(p, w.port(x, 2));
    w.link(w.port(x, 3), q);
  }
  return w.finish();
}

void enum_r2(const Ctx& c, const MoveFilter& f, std::vector<MoveApplication>& out) {
  const auto& d = c.d;
  for (int face = 0; face < c.map.face_count(); ++face) {
    const auto& fd = c.map.face_darts(face);
    if (fd.size() != 2 || fd[0] >= d.port_count() || fd[1] >= d.port_count()) continue;
    const int a = fd[0];
    const int x1 = c.node_of(a), x2 = c.node_of(fd[1]);
    if (!c.is(x1, NodeKind::crossing) || !c.is(x2, NodeKind::crossing) || x1 == x2) continue;
    const int b = d.mate(a);
    if (d.is_over(x1, c.pos(a)) != d.is_over(x2, c.pos(b))) continue;
    // Skip bigons whose removal would fuse both strands into one arc; their
    // outer ends form a curl that R1 removes first.
    const int e = d.mate(fd[1]);
    const int o[4] = {rot(d, a, 2), rot(d, b, 2), rot(d, fd[1], 2), rot(d, e, 2)};
    bool fused = false;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j && d.mate(o[i]) == o[j] && !((i ^ j) == 1 && i / 2 == j / 2)) fused = true;
    if (fused) continue;
    offer(c, f, out, {MoveKind::R2, Direction::forward, {a}, 0, -2, 0, 0});
  }
  const int np = d.port_count();
  for (int s = 0; s < np; ++s)
    for (int t = s + 1; t < np; ++t) {
      if (d.mate(s) == t || !c.cofacial(s, t)) continue;
      for (int v = 0; v < 2; ++v)
        offer(c, f, out, {MoveKind::R2, Direction::backward, {s, t}, v, 2, 0, 0});
    }
  if (d.free_loops() > 0)
    for (int t = 0; t < np; ++t)
      for (int v = 0; v < 2; ++v)
        offer(c, f, out, {MoveKind::R2, Direction::backward, {-1, t}, v, 2, 0, 0});
  if (d.free_loops() > 1)
    offer(c, f, out, {MoveKind::R2, Direction::backward, {-1, -2}, 0, 2, 0, 0});
}

SquareDiagram apply_r2(const SquareDiagram& d, const MoveApplication& m) {
  Rewriter w(d);
  if (m.direction == Direction::forward) {
    const int a = m.site[0];
    for (int n : {d.owner(a).index, d.owner(d.mate(a)).index}) {
      w.kill_node(n);
      w.through(w.port(n, 0), w.port(n, 2));
      w.through(w.port(n, 1), w.port(n, 3));
    }
    return w.finish();
  }
  // A finger of strand s pushed across strand t. Ports 1 and 3 carry s at
  // both new crossings; variant 0 puts s on top.
  const int over = m.variant == 0 ? 1 : 0;
  const int xa = w.add_node(NodeKind::crossing, 4, over);
  const int xb = w.add_node(NodeKind::crossing, 4, over);
  auto P = [&](int n, int i) { return w.port(n, i); };
  const int s = m.site[0], t = m.site[1];
  w.link(P(xa, 1), P(xb, 1));
  if (s >= 0) {
    const int q1 = d.mate(s);
    w.link(s, P(xa, 3));
    w.link(P(xb, 3), q1);
  } else {
    w.link(P(xa, 3), P(xb, 3));
    w.add_free_loops(-1);
  }
  w.link(P(xb, 2), P(xa, 0));
  if (t >= 0) {
    const int q2 = d.mate(t);
    w.link(t, P(xb, 0));
    w.link(P(xa, 2), q2);
  } else {
    w.link(P(xb, 0), P(xa, 2));
    w.add_free_loops(-1);
  }
  return w.finish();
}

namespace {

// A triangular face of three crossings. The face runs X1 -> X2 -> X3 with the
// interior on its left; q[i] is the position at X[i] of the side arriving from
// the previous crossing. Chord 0 is the strand along X1X2, chord 1 along X3X1,
// chord 2 along X2X3.
struct Triangle {
  bool ok = false;
  int x[3]{};
  int q[3]{};
  int level[3]{};  // number of crossings where the chord is on top
};

Triangle triangle(const SquareDiagram& d, int d0) {
  Triangle t;
  if (d0 < 0 || d0 >= d.port_count()) return t;
  int dart = d0;
  for (int i = 0; i < 3; ++i) {
    const auto& o = d.owner(dart);
    if (o.puncture || d.node(o.index).kind != NodeKind::crossing) return t;
    const int arrive = d.mate(dart);
    const auto& oa = d.owner(arrive);
    if (oa.puncture || d.node(oa.index).kind != NodeKind::crossing) return t;
    t.x[(i + 1) % 3] = oa.index;
    t.q[(i + 1) % 3] = oa.position;
    dart = rot(d, arrive, -1);
  }
  if (dart != d0 || t.x[0] == t.x[1] || t.x[1] == t.x[2] || t.x[0] == t.x[2]) return t;
  const bool c0 = d.is_over(t.x[0], t.q[0] + 1), c0b = d.is_over(t.x[1], t.q[1]);
  const bool c1 = d.is_over(t.x[0], t.q[0]), c1b = d.is_over(t.x[2], t.q[2] + 1);
  const bool c2 = d.is_over(t.x[1], t.q[1] + 1), c2b = d.is_over(t.x[2], t.q[2]);
  t.level[0] = c0 + c0b;
  t.level[1] = c1 + c1b;
  t.level[2] = c2 + c2b;
  t.ok = t.level[0] == 2 || t.level[1] == 2 || t.level[2] == 2;
  return t;
}

}  // namespace

void enum_r3(const Ctx& c, const MoveFilter& f, std::vector<MoveApplication>& out) {
  for (int face = 0; face < c.map.face_count(); ++face) {
    const auto& fd = c.map.face_darts(face);
    if (fd.size() != 3) continue;
    if (!triangle(c.d, fd[0]).ok) continue;
    offer(c, f, out, {MoveKind::R3, Direction::forward, {fd[0]}, 0, 0, 0, 0});
  }
}

SquareDiagram apply_r3(const SquareDiagram& d, const MoveApplication& m) {
  const auto t = triangle(d, m.site[0]);
  if (!t.ok) throw PreconditionError("R3 needs a triangle with a strand on top");
  Rewriter w(d);
  auto X = [&](int i, int k) { return w.port(t.x[i], t.q[i] + k < 4 ? t.q[i] + k : t.q[i] + k - 4); };
  // outer ports in counterclockwise order around the triangle
  const int e[6] = {X(0, 1), X(0, 2), X(1, 1), X(1, 2), X(2, 1), X(2, 2)};
  for (int i = 0; i < 3; ++i) w.kill_node(t.x[i]);
  // Flipped triangle: ya = chord0 x chord2, yb = chord0 x chord1, yc = chord1 x chord2.
  const int ya = w.add_node(NodeKind::crossing, 4, t.level[0] > t.level[2] ? 0 : 1);
  const int yb = w.add_node(NodeKind::crossing, 4, t.level[0] > t.level[1] ? 0 : 1);
  const int yc = w.add_node(NodeKind::crossing, 4, t.level[1] > t.level[2] ? 0 : 1);
  w.substitute(e[0], w.port(ya, 0));
  w.substitute(e[5], w.port(ya, 3));
  w.substitute(e[3], w.port(yb, 2));
  w.substitute(e[4], w.port(yb, 3));
  w.substitute(e[1], w.port(yc, 0));
  w.substitute(e[2], w.port(yc, 1));
  w.link(w.port(ya, 1), w.port(yc, 3));
  w.link(w.port(ya, 2), w.port(yb, 0));
  w.link(w.port(yb, 1), w.port(yc, 2));
  return w.finish();
}

}  // namespace periodica::detail
