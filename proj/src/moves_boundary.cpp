// Moves at the faces, edges and corners of the cell: R5 marker pairs, R6 seam
// bumps, R8 corner arcs, and R7/R9/R13 which push a crossing, a marker or a
// vertex through an edge of the square.
#include "moves_common.hpp"

namespace periodica::detail {

void enum_r5(const Ctx& c, const MoveFilter& f, std::vector<MoveApplication>& out) {
  const auto& d = c.d;
  for (int n = 0; n < c.nodes; ++n) {
    if (!c.is(n, NodeKind::marker)) continue;
    for (int a = 0; a < 2; ++a) {
      const int p = c.port(n, a);
      const int o = d.mate(p);
      const int n2 = c.node_of(o);
      if (!c.is(n2, NodeKind::marker) || n2 == n || c.pos(o) != a || o < p) continue;
      offer(c, f, out, {MoveKind::R5, Direction::forward, {p}, 0, 0, -2, 0});
    }
  }
  for (int p = 0; p < d.port_count(); ++p) {
    if (d.mate(p) < p) continue;
    for (int v = 0; v < 2; ++v) offer(c, f, out, {MoveKind::R5, Direction::backward, {p}, v, 0, 2, 0});
  }
  if (d.free_loops() > 0) offer(c, f, out, {MoveKind::R5, Direction::backward, {-1}, 0, 0, 2, 0});
}

SquareDiagram apply_r5(const SquareDiagram& d, const MoveApplication& m) {
  Rewriter w(d);
  if (m.direction == Direction::forward) {
    const int p = m.site[0];
    for (int n : {d.owner(p).index, d.owner(d.mate(p)).index}) {
      w.kill_node(n);
      w.through(w.port(n, kDot), w.port(n, kCircle));
    }
    return w.finish();
  }
  const int m1 = w.add_node(NodeKind::marker, 2);
  const int m2 = w.add_node(NodeKind::marker, 2);
  // variant 0 joins the two circles, variant 1 the two dots
  const int inner = m.variant == 0 ? kCircle : kDot;
  const int outer = 1 - inner;
  w.link(w.port(m1, inner), w.port(m2, inner));
  if (m.site[0] < 0) {
    w.link(w.port(m1, outer), w.port(m2, outer));
    w.add_free_loops(-1);
  } else {
    const int p = m.site[0], q = d.mate(p);
    w.link(p, w.port(m1, outer));
    w.link(w.port(m2, outer), q);
  }
  return w.finish();
}

void enum_r6(const Ctx& c, const MoveFilter& f, std::vector<MoveApplication>& out) {
  const auto& d = c.d;
  for (int s = 0; s < 4; ++s) {
    const Side e = static_cast<Side>(s);
    const int n = d.puncture_count(e);
    for (int k = 0; k + 1 < n; ++k) {
      const int a = d.puncture_at(e, k), b = d.puncture_at(e, k + 1);
      if (d.mate(d.puncture(a).port) == d.puncture(b).port)
        offer(c, f, out, {MoveKind::R6, Direction::forward, {s, k}, 0, 0, 0, -2});
    }
  }
  for (int s = 0; s < 4; ++s) {
    const Side e = static_cast<Side>(s);
    const int n = d.puncture_count(e);
    for (int k = 0; k <= n; ++k) {
      const int gf = c.map.gap_face(e, k);
      for (int p = 0; p < d.port_count(); ++p)
        if (gf < 0 || c.reaches(p, gf))
          offer(c, f, out, {MoveKind::R6, Direction::backward, {p, s, k}, 0, 0, 0, 2});
      if (d.free_loops() > 0)
        offer(c, f, out, {MoveKind::R6, Direction::backward, {-1, s, k}, 0, 0, 0, 2});
    }
  }
}

SquareDiagram apply_r6(const SquareDiagram& d, const MoveApplication& m) {
  Rewriter w(d);
  if (m.direction == Direction::forward) {
    const Side e = static_cast<Side>(m.site[0]);
    const int k = m.site[1];
    for (int j = k; j <= k + 1; ++j) {
      const int a = d.puncture_at(e, j), b = d.puncture_at(opposite(e), j);
      w.kill_puncture(a);
      w.kill_puncture(b);
      w.through(d.puncture(a).port, d.puncture(b).port);
    }
    w.shift_slots(e, k + 2, -2);
    return w.finish();
  }
  const int s = m.site[0];
  const Side e = static_cast<Side>(m.site[1]);
  const int k = m.site[2];
  w.shift_slots(e, k, 2);
  const int e0 = w.add_puncture(e, k), e1 = w.add_puncture(e, k + 1);
  const int f0 = w.add_puncture(opposite(e), k), f1 = w.add_puncture(opposite(e), k + 1);
  const bool inc = ccw_increasing(e);
  const int first = w.puncture_port(inc ? e0 : e1), second = w.puncture_port(inc ? e1 : e0);
  if (s >= 0) {
    // the arc is pushed out through the gap: its end comes back first
    const int q = d.mate(s);
    w.link(first, q);
    w.link(second, s);
  } else {
    w.link(first, second);
    w.add_free_loops(-1);
  }
  w.link(w.puncture_port(f0), w.puncture_port(f1));
  return w.finish();
}

namespace {

struct Corner {
  Side e1, e2;  // the edges before and after the corner, counterclockwise
};
constexpr Corner kCorners[4] = {{Side::bottom, Side::right},
                                {Side::right, Side::top},
                                {Side::top, Side::left},
                                {Side::left, Side::bottom}};

int ccw_last_slot(Side s, int n) { return ccw_increasing(s) ? n - 1 : 0; }
int ccw_first_slot(Side s, int n) { return ccw_increasing(s) ? 0 : n - 1; }

}  // namespace

void enum_r8(const Ctx& c, const MoveFilter& f, std::vector<MoveApplication>& out) {
  const auto& d = c.d;
  for (int k = 0; k < 4; ++k) {
    const auto [e1, e2] = kCorners[k];
    const int n1 = d.puncture_count(e1), n2 = d.puncture_count(e2);
    if (n1 == 0 || n2 == 0) continue;
    const int u1 = d.puncture_at(e1, ccw_last_slot(e1, n1));
    const int u2 = d.puncture_at(e2, ccw_first_slot(e2, n2));
    if (d.mate(d.puncture(u1).port) == d.puncture(u2).port)
      offer(c, f, out, {MoveKind::R8, Direction::forward, {k}, 0, 0, 0, 0});
  }
}

SquareDiagram apply_r8(const SquareDiagram& d, const MoveApplication& m) {
  const auto [e1, e2] = kCorners[m.site[0]];
  const int n1 = d.puncture_count(e1), n2 = d.puncture_count(e2);
  const int s1 = ccw_last_slot(e1, n1), s2 = ccw_first_slot(e2, n2);
  const int u1 = d.puncture_at(e1, s1), u2 = d.puncture_at(e2, s2);
  const int pu1 = d.partner(u1), pu2 = d.partner(u2);
  Rewriter w(d);
  for (int k : {u1, u2, pu1, pu2}) w.kill_puncture(k);
  w.shift_slots(e1, s1 + 1, -1);
  w.shift_slots(e2, s2 + 1, -1);
  // The corner arc reappears at the diagonally opposite corner.
  const Side f1 = opposite(e1), f2 = opposite(e2);
  int t1 = n1 - 1;
  if (!ccw_increasing(f1)) {
    w.shift_slots(f1, 0, 1);
    t1 = 0;
  }
  int t2 = n2 - 1;
  if (ccw_increasing(f2)) {
    w.shift_slots(f2, 0, 1);
    t2 = 0;
  }
  const int w1 = w.add_puncture(f1, t1), pw1 = w.add_puncture(e1, t1);
  const int w2 = w.add_puncture(f2, t2), pw2 = w.add_puncture(e2, t2);
  w.link(w.puncture_port(w1), w.puncture_port(w2));
  w.substitute(d.puncture(pu2).port, w.puncture_port(pw1));
  w.substitute(d.puncture(pu1).port, w.puncture_port(pw2));
  return w.finish();
}

namespace {

NodeKind pass_kind(MoveKind k) {
  if (k == MoveKind::R7) return NodeKind::crossing;
  if (k == MoveKind::R9) return NodeKind::marker;
  return NodeKind::vertex;
}

// Whether a port lies outside the pattern of node v and the given punctures.
bool outside(const Ctx& c, int port, int v, const std::vector<int>& punctures) {
  if (port < 0 || c.node_of(port) == v) return false;
  const int k = c.puncture_of(port);
  for (int x : punctures)
    if (x == k) return false;
  return true;
}

}  // namespace

void enum_pass(const Ctx& c, const MoveFilter& f, std::vector<MoveApplication>& out, MoveKind kind) {
  const auto& d = c.d;
  const NodeKind nk = pass_kind(kind);
  for (int v = 0; v < c.nodes; ++v) {
    if (!c.is(v, nk)) continue;
    const int deg = c.arity(v);
    if (deg == 0) continue;
    int m_lo = 1, m_hi = deg;
    if (kind == MoveKind::R7) m_lo = m_hi = 2;
    if (kind == MoveKind::R9) m_lo = m_hi = 1;
    for (int i = 0; i < deg; ++i)
      for (int m = m_lo; m <= m_hi; ++m) {
        std::vector<int> pk;
        bool ok = true;
        Side e = Side::left;
        for (int j = 0; j < m && ok; ++j) {
          const int k = c.puncture_of(d.mate(c.port(v, i + j)));
          if (k < 0) {
            ok = false;
            break;
          }
          if (j == 0) e = d.puncture(k).side;
          const int expect = ccw_increasing(e) ? d.puncture(pk.empty() ? k : pk[0]).slot + j
                                                : d.puncture(pk.empty() ? k : pk[0]).slot - j;
          if (d.puncture(k).side != e || d.puncture(k).slot != expect) ok = false;
          pk.push_back(k);
        }
        if (!ok) continue;
        std::vector<int> all = pk;
        for (int k : pk) all.push_back(d.partner(k));
        for (int j = 0; j < m && ok; ++j)
          ok = outside(c, d.mate(d.puncture(d.partner(pk[j])).port), v, all);
        for (int j = m; j < deg && ok; ++j) ok = outside(c, d.mate(c.port(v, i + j)), v, all);
        if (!ok) continue;
        int k0 = d.puncture(pk[0]).slot;
        if (!ccw_increasing(e)) k0 -= m - 1;
        const int delta = (deg - m) - m;
        offer(c, f, out,
              {kind, delta <= 0 ? Direction::forward : Direction::backward,
               {v, i, m, static_cast<int>(e), k0}, 0, 0, 0, delta});
      }
    if (kind != MoveKind::R13) continue;
    // a vertex next to an edge pushed through it with all its edges trailing
    bool loops = false;
    for (int j = 0; j < deg; ++j) loops = loops || c.node_of(d.mate(c.port(v, j))) == v;
    if (loops) continue;
    const int cv = c.comp_of_port(c.port(v, 0));
    for (int i = 0; i < deg; ++i) {
      const int face = c.map.corner_face(c.port(v, i));
      for (int s = 0; s < 4; ++s) {
        const Side e = static_cast<Side>(s);
        for (int k = 0; k <= d.puncture_count(e); ++k) {
          const int gf = c.map.gap_face(e, k);
          if (gf >= 0 && gf != face && !(c.floating(cv) && cv != c.comp_of_face(gf))) continue;
          offer(c, f, out, {kind, Direction::backward, {v, i, 0, s, k}, 0, 0, 0, deg});
        }
      }
    }
  }
}

SquareDiagram apply_pass(const SquareDiagram& d, const MoveApplication& mv) {
  const int v = mv.site[0], i = mv.site[1], m = mv.site[2];
  const Side e = static_cast<Side>(mv.site[3]);
  const Side ep = opposite(e);
  const int k = mv.site[4];
  const auto& ports = d.node(v).ports;
  const int deg = static_cast<int>(ports.size());
  auto vp = [&](int j) { return ports[((i + j) % deg + deg) % deg]; };
  Rewriter w(d);
  for (int j = 0; j < m; ++j) {
    const int a = d.owner(d.mate(vp(j))).index;
    const int b = d.partner(a);
    w.kill_puncture(a);
    w.kill_puncture(b);
    w.through(d.puncture(a).port, d.puncture(b).port);
  }
  const int c = deg - m;
  w.shift_slots(e, k + m, c - m);
  for (int j = 0; j < c; ++j) {
    const int port = vp(m + j);
    const int o = d.mate(port);
    const int slot = ccw_increasing(ep) ? k + j : k + c - 1 - j;
    const int a = w.add_puncture(ep, slot);
    const int b = w.add_puncture(e, slot);
    w.link(port, w.puncture_port(a));
    w.link(w.puncture_port(b), o);
  }
  return w.finish();
}

}  // namespace periodica::detail
