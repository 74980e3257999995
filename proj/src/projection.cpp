#include "periodica/projection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace periodica {

namespace {

constexpr double kTol = 1e-7;     // positional tolerance, fractional units
constexpr double kDepthTol = 1e-9;

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

double real(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw NetError(line, "expected a number, got '" + s + "'");
}

int integer(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used == s.size()) return static_cast<int>(v);
  } catch (const std::exception&) {
  }
  throw NetError(line, "expected an integer offset, got '" + s + "'");
}

// Moves every vertex into [0,1) and compensates in the edges.
void wrap(PeriodicEmbedding& e) {
  std::vector<std::array<int, 3>> shift(e.vertices.size());
  for (std::size_t i = 0; i < e.vertices.size(); ++i)
    for (int k = 0; k < 3; ++k) {
      auto& x = e.vertices[i].pos[k];
      shift[i][k] = static_cast<int>(std::floor(x));
      x -= shift[i][k];
      if (x >= 1.0) {
        x -= 1.0;
        ++shift[i][k];
      }
    }
  for (auto& ed : e.edges)
    for (int k = 0; k < 3; ++k) {
      ed.offset[k] += shift[ed.b][k] - shift[ed.a][k];
      for (auto& p : ed.via) p[k] -= shift[ed.a][k];
    }
}

// (right, up, depth) in cell axes for each projection axis.
std::array<int, 3> frame(int axis) {
  switch (axis) {
    case 1: return {1, 2, 0};
    case 2: return {2, 0, 1};
    default: return {0, 1, 2};
  }
}

using P2 = std::array<double, 2>;

double cross(P2 a, P2 b) { return a[0] * b[1] - a[1] * b[0]; }
P2 sub(P2 a, P2 b) { return {a[0] - b[0], a[1] - b[1]}; }
double norm(P2 a) { return std::hypot(a[0], a[1]); }

double point_segment_distance(P2 p, P2 a, P2 b) {
  const P2 d = sub(b, a);
  const double len2 = d[0] * d[0] + d[1] * d[1];
  double t = len2 > 0 ? ((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(sub(p, {a[0] + t * d[0], a[1] + t * d[1]}));
}

double off_integer(double x) { return std::abs(x - std::round(x)); }

// Where a piece of an edge starts or ends: at a vertex, or on a face of the
// cube at local coordinate `k` equal to `value`.
struct End {
  bool vertex = false;
  int index = -1;  // vertex index, or passage index
  int k = 0, value = 0;
};

struct Piece {
  std::vector<Point3> pts;  // local (right, up, depth) coordinates in [0,1]
  End start, end;
};

// A passage of an edge through the faces normal to local axis k.
struct Passage {
  int k = 0;
  double along = 0;  // position along the face trace (the other planar coordinate)
  P2 at{};           // projected position of the passage on the front/back face
};

struct Seg {
  int piece = 0, index = 0;
  P2 a{}, b{};
  double wa = 0, wb = 0;
  int fa = -1, fb = -1;  // feature ids of the two ends
};

struct Hit {
  int sa = 0, sb = 0;
  double ta = 0, tb = 0;
  P2 at{};
  bool a_over = false;
};

struct Layout {
  int axis = 0;
  std::vector<Piece> pieces;
  std::vector<Passage> passages;
  std::vector<Seg> segs;
  std::vector<Hit> hits;
  std::vector<GenericityViolation> violations;

  void violate(std::string rule, std::string detail) {
    violations.push_back({axis, std::move(rule), std::move(detail)});
  }
};

Layout lay_out(const PeriodicEmbedding& e, int axis) {
  Layout L;
  L.axis = axis;
  const auto f = frame(axis);
  auto local = [&](const Point3& p) { return Point3{p[f[0]], p[f[1]], p[f[2]]}; };

  for (std::size_t vi = 0; vi < e.vertices.size(); ++vi)
    for (int k = 0; k < 3; ++k)
      if (off_integer(e.vertices[vi].pos[k]) < kTol)
        L.violate("9", "vertex " + e.vertices[vi].label + " lies on a face of the cell");

  for (std::size_t ei = 0; ei < e.edges.size(); ++ei) {
    const auto& ed = e.edges[ei];
    std::vector<Point3> path{local(e.vertices[ed.a].pos)};
    for (const auto& p : ed.via) {
      const Point3 q = local(p);
      for (int k = 0; k < 3; ++k)
        if (off_integer(q[k]) < kTol) L.violate("4", "edge " + std::to_string(ei) + " bends on a face");
      path.push_back(q);
    }
    Point3 end = e.vertices[ed.b].pos;
    for (int k = 0; k < 3; ++k) end[k] += ed.offset[k];
    path.push_back(local(end));

    std::vector<Point3> cur{path[0]};
    End start{true, ed.a, 0, 0};
    auto close = [&](End fin) {
      Piece pc{cur, start, fin};
      // translate into the unit cube by the cell of the first segment's midpoint
      Point3 cell{};
      for (int k = 0; k < 3; ++k) cell[k] = std::floor((pc.pts[0][k] + pc.pts[1][k]) / 2);
      for (auto& p : pc.pts)
        for (int k = 0; k < 3; ++k) p[k] -= cell[k];
      if (!pc.start.vertex) pc.pts.front()[pc.start.k] = pc.start.value;
      if (!pc.end.vertex) pc.pts.back()[pc.end.k] = pc.end.value;
      L.pieces.push_back(std::move(pc));
    };
    for (std::size_t s = 0; s + 1 < path.size(); ++s) {
      const Point3 p = path[s], q = path[s + 1];
      struct Cut {
        double t;
        int k;
        double plane;
      };
      std::vector<Cut> cuts;
      for (int k = 0; k < 3; ++k) {
        if (p[k] == q[k]) continue;
        const double lo = std::min(p[k], q[k]), hi = std::max(p[k], q[k]);
        for (double m = std::ceil(lo); m <= hi; m += 1.0) {
          if (m == lo || m == hi) continue;  // bends on faces are reported above
          cuts.push_back({(m - p[k]) / (q[k] - p[k]), k, m});
        }
      }
      std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.t < b.t; });
      for (const auto& c : cuts) {
        Point3 x;
        for (int k = 0; k < 3; ++k) x[k] = p[k] + c.t * (q[k] - p[k]);
        for (int k = 0; k < 3; ++k)
          if (k != c.k && off_integer(x[k]) < kTol)
            L.violate(c.k == 2 ? "7" : "6", "edge " + std::to_string(ei) + " passes through an edge of the cell");
        const int up = q[c.k] > p[c.k] ? 1 : 0;
        Passage ps;
        ps.k = c.k;
        ps.along = x[c.k == 0 ? 1 : 0] - std::floor(x[c.k == 0 ? 1 : 0]);
        ps.at = {x[0] - std::floor(x[0]), x[1] - std::floor(x[1])};
        const int id = static_cast<int>(L.passages.size());
        L.passages.push_back(ps);
        cur.push_back(x);
        close({false, id, c.k, up});
        cur = {x};
        start = {false, id, c.k, 1 - up};
      }
      cur.push_back(q);
    }
    close({true, ed.b, 0, 0});
  }

  // Segments with feature ids: vertices first, then markers, then unique ids.
  const int nv = static_cast<int>(e.vertices.size());
  int next_feature = nv + static_cast<int>(L.passages.size());
  auto feature = [&](const End& en) {
    if (en.vertex) return en.index;
    if (en.k == 2) return nv + en.index;
    return next_feature++;
  };
  for (int pi = 0; pi < static_cast<int>(L.pieces.size()); ++pi) {
    const auto& pc = L.pieces[pi];
    const int n = static_cast<int>(pc.pts.size());
    int fa = feature(pc.start);
    for (int i = 0; i + 1 < n; ++i) {
      Seg s;
      s.piece = pi;
      s.index = i;
      s.a = {pc.pts[i][0], pc.pts[i][1]};
      s.b = {pc.pts[i + 1][0], pc.pts[i + 1][1]};
      s.wa = pc.pts[i][2];
      s.wb = pc.pts[i + 1][2];
      s.fa = fa;
      s.fb = i + 2 == n ? feature(pc.end) : next_feature++;
      fa = s.fb;
      if (norm(sub(s.b, s.a)) < kTol) L.violate("2", "a segment runs along the projection axis");
      L.segs.push_back(s);
    }
  }

  // Vertices and markers must not sit on other strands.
  const int point_features = nv + static_cast<int>(L.passages.size());
  std::map<int, P2> points;
  for (const auto& s : L.segs) {
    if (s.fa < point_features) points[s.fa] = s.a;
    if (s.fb < point_features) points[s.fb] = s.b;
  }
  for (const auto& [fid, at] : points)
    for (const auto& s : L.segs) {
      if (s.fa == fid || s.fb == fid) continue;
      if (point_segment_distance(at, s.a, s.b) < kTol)
        L.violate(fid < nv ? "8" : "3", fid < nv ? "a vertex projects onto a strand"
                                                 : "a face passage projects onto a strand");
    }

  const int ns = static_cast<int>(L.segs.size());
  for (int i = 0; i < ns; ++i)
    for (int j = i + 1; j < ns; ++j) {
      const auto& A = L.segs[i];
      const auto& B = L.segs[j];
      const P2 r = sub(A.b, A.a), s = sub(B.b, B.a);
      const double den = cross(r, s);
      const bool shared = A.fa == B.fa || A.fa == B.fb || A.fb == B.fa || A.fb == B.fb;
      if (std::abs(den) < kTol * norm(r) * norm(s)) {
        if (std::abs(cross(r, sub(B.a, A.a))) > kTol * norm(r)) continue;  // parallel, apart
        // collinear: measure the overlap along A
        const double rr = r[0] * r[0] + r[1] * r[1];
        auto param = [&](P2 p) { return ((p[0] - A.a[0]) * r[0] + (p[1] - A.a[1]) * r[1]) / rr; };
        const double lo = std::max(0.0, std::min(param(B.a), param(B.b)));
        const double hi = std::min(1.0, std::max(param(B.a), param(B.b)));
        if ((hi - lo) * std::sqrt(rr) > kTol)
          L.violate("2", "two strands overlap in projection");
        else if (hi - lo > -kTol && !shared)
          L.violate("8", "a strand passes through the end of another");
        continue;
      }
      const P2 qp = sub(B.a, A.a);
      const double ta = cross(qp, s) / den, tb = cross(qp, r) / den;
      const double ea = kTol / norm(r), eb = kTol / norm(s);
      if (ta < -ea || ta > 1 + ea || tb < -eb || tb > 1 + eb) continue;
      const bool a_end = ta < ea || ta > 1 - ea, b_end = tb < eb || tb > 1 - eb;
      if (a_end || b_end) {
        if (shared) continue;  // the common end point
        L.violate("8", "a strand passes through the end of another");
        continue;
      }
      Hit h;
      h.sa = i;
      h.sb = j;
      h.ta = ta;
      h.tb = tb;
      h.at = {A.a[0] + ta * r[0], A.a[1] + ta * r[1]};
      const double wa = A.wa + ta * (A.wb - A.wa), wb = B.wa + tb * (B.wb - B.wa);
      if (std::abs(wa - wb) < kDepthTol) L.violate("depth", "two strands meet in 3-space");
      h.a_over = wa > wb;
      for (double c : h.at)
        if (c < kTol || c > 1 - kTol) L.violate("5", "a double point lies on an edge of the square");
      L.hits.push_back(h);
    }
  for (std::size_t i = 0; i < L.hits.size(); ++i)
    for (std::size_t j = i + 1; j < L.hits.size(); ++j)
      if (norm(sub(L.hits[i].at, L.hits[j].at)) < kTol) L.violate("1", "three strands meet in projection");

  // punctures of one edge pair must not share a position
  for (int k = 0; k < 2; ++k) {
    std::vector<double> along;
    for (const auto& ps : L.passages)
      if (ps.k == k) along.push_back(ps.along);
    std::sort(along.begin(), along.end());
    for (std::size_t i = 1; i < along.size(); ++i)
      if (along[i] - along[i - 1] < kTol) L.violate("5", "two strands meet on an edge of the square");
  }
  return L;
}

Side face_side(int k, int value) {
  if (k == 0) return value ? Side::right : Side::left;
  return value ? Side::top : Side::bottom;
}

}  // namespace

PeriodicEmbedding load_net(std::string_view text) {
  PeriodicEmbedding e;
  std::map<std::string, int> index;
  struct RawEdge {
    int line;
    std::string a, b;
    NetEdge edge;
  };
  std::vector<RawEdge> raw;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_cell = false;
  for (int ln = 1; std::getline(in, line); ++ln) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto t = tokens(line);
    if (t.empty()) continue;
    if (t[0] == "cell") {
      if (t.size() != 7) throw NetError(ln, "cell takes a b c alpha beta gamma");
      if (have_cell) throw NetError(ln, "second cell record");
      have_cell = true;
      for (int i = 0; i < 6; ++i) e.cell[i] = real(t[i + 1], ln);
      for (int i = 0; i < 3; ++i)
        if (e.cell[i] <= 0 || e.cell[i + 3] <= 0 || e.cell[i + 3] >= 180)
          throw NetError(ln, "degenerate cell");
    } else if (t[0] == "vertex") {
      if (t.size() != 5) throw NetError(ln, "vertex takes a label and three coordinates");
      if (index.count(t[1])) throw NetError(ln, "duplicate vertex " + t[1]);
      index[t[1]] = static_cast<int>(e.vertices.size());
      e.vertices.push_back({t[1], {real(t[2], ln), real(t[3], ln), real(t[4], ln)}});
    } else if (t[0] == "edge") {
      if (t.size() < 6) throw NetError(ln, "edge takes two labels and an integer offset");
      RawEdge r{ln, t[1], t[2], {}};
      for (int k = 0; k < 3; ++k) r.edge.offset[k] = integer(t[3 + k], ln);
      if (t.size() > 6) {
        if (t[6] != "via" || (t.size() - 7) % 3 != 0 || t.size() == 7)
          throw NetError(ln, "expected 'via' and interior points after the offset");
        for (std::size_t i = 7; i < t.size(); i += 3)
          r.edge.via.push_back({real(t[i], ln), real(t[i + 1], ln), real(t[i + 2], ln)});
      }
      raw.push_back(std::move(r));
    } else {
      throw NetError(ln, "unknown record '" + t[0] + "'");
    }
  }
  std::vector<char> used(e.vertices.size(), 0);
  for (auto& r : raw) {
    for (const auto* lab : {&r.a, &r.b})
      if (!index.count(*lab)) throw NetError(r.line, "unknown vertex " + *lab);
    r.edge.a = index[r.a];
    r.edge.b = index[r.b];
    used[r.edge.a] = used[r.edge.b] = 1;
    if (r.edge.a == r.edge.b && r.edge.offset == std::array<int, 3>{} && r.edge.via.empty())
      throw NetError(r.line, "edge of zero length");
    e.edges.push_back(std::move(r.edge));
  }
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i]) throw NetError(0, "vertex " + e.vertices[i].label + " has no edges");
  wrap(e);
  return e;
}

std::vector<GenericityViolation> genericity_violations(const PeriodicEmbedding& e, int axis) {
  std::vector<GenericityViolation> out;
  for (int a = 1; a <= 3; ++a) {
    if (axis != 0 && a != axis) continue;
    auto v = lay_out(e, a).violations;
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

PeriodicEmbedding perturb_generic(const PeriodicEmbedding& e, const PerturbOptions& o) {
  auto first = genericity_violations(e);
  if (first.empty()) return e;
  std::mt19937_64 rng(o.seed);
  // uniform in [-eps, eps] from the top 53 bits, independent of the library's distributions
  auto jitter = [&] { return o.eps * (2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0); };
  // Straight edges get a midpoint to jitter: two edges to translates of the
  // same vertex along the projection axis cannot be separated otherwise.
  PeriodicEmbedding bent = e;
  for (auto& ed : bent.edges)
    if (ed.via.empty()) {
      Point3 mid;
      for (int k = 0; k < 3; ++k)
        mid[k] = (e.vertices[ed.a].pos[k] + e.vertices[ed.b].pos[k] + ed.offset[k]) / 2;
      ed.via.push_back(mid);
    }
  for (int attempt = 0; attempt < o.max_tries && o.eps > 0; ++attempt) {
    PeriodicEmbedding p = bent;
    for (auto& v : p.vertices)
      for (auto& x : v.pos) x += jitter();
    for (auto& ed : p.edges)
      for (auto& q : ed.via)
        for (auto& x : q) x += jitter();
    wrap(p);
    auto v = genericity_violations(p);
    if (v.empty()) return p;
    first = std::move(v);
  }
  throw GenericityError(first.front());
}

SquareDiagram project(const PeriodicEmbedding& e, int axis) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("axis must be 1, 2 or 3");
  const Layout L = lay_out(e, axis);
  if (!L.violations.empty()) throw GenericityError(L.violations.front());

  SquareDiagram d;
  d.set_axis(axis);

  // vertex rotations: piece ends ordered counterclockwise by direction
  const int nv = static_cast<int>(e.vertices.size());
  std::vector<std::vector<std::pair<double, int>>> around(nv);  // (angle, piece end = 2*piece+is_end)
  for (int pi = 0; pi < static_cast<int>(L.pieces.size()); ++pi) {
    const auto& pc = L.pieces[pi];
    const auto n = pc.pts.size();
    if (pc.start.vertex)
      around[pc.start.index].push_back(
          {std::atan2(pc.pts[1][1] - pc.pts[0][1], pc.pts[1][0] - pc.pts[0][0]), 2 * pi});
    if (pc.end.vertex)
      around[pc.end.index].push_back(
          {std::atan2(pc.pts[n - 2][1] - pc.pts[n - 1][1], pc.pts[n - 2][0] - pc.pts[n - 1][0]), 2 * pi + 1});
  }
  std::map<int, int> end_port;  // piece end -> port
  for (int v = 0; v < nv; ++v) {
    auto& a = around[v];
    std::sort(a.begin(), a.end());
    const int n = d.add_node(NodeKind::vertex, static_cast<int>(a.size()), v + 1);
    d.set_label(n, e.vertices[v].label);
    for (std::size_t j = 0; j < a.size(); ++j) end_port[a[j].second] = d.node(n).ports[j];
  }

  // face passages: markers for the depth axis, puncture pairs for the others
  std::vector<int> passage_node(L.passages.size(), -1);
  std::array<std::vector<std::pair<double, int>>, 2> along;
  for (int i = 0; i < static_cast<int>(L.passages.size()); ++i) {
    const auto& ps = L.passages[i];
    if (ps.k == 2)
      passage_node[i] = d.add_node(NodeKind::marker, 2, d.next_id());
    else
      along[ps.k].push_back({ps.along, i});
  }
  std::vector<int> passage_slot(L.passages.size(), -1);
  for (auto& a : along) {
    std::sort(a.begin(), a.end());
    for (std::size_t s = 0; s < a.size(); ++s) passage_slot[a[s].second] = static_cast<int>(s);
  }
  std::map<std::pair<int, int>, int> puncture_port;  // (passage, face value) -> port
  for (int k = 0; k < 2; ++k)
    for (const auto& [pos, i] : along[k])
      for (int value : {0, 1}) {
        const int p = d.add_puncture(face_side(k, value), passage_slot[i]);
        puncture_port[{i, value}] = d.puncture(p).port;
      }
  auto port_at = [&](int piece, bool is_end) {
    const auto& en = is_end ? L.pieces[piece].end : L.pieces[piece].start;
    if (en.vertex) return end_port.at(2 * piece + (is_end ? 1 : 0));
    if (en.k == 2) return d.node(passage_node[en.index]).ports[en.value == 1 ? kDot : kCircle];
    return puncture_port.at({en.index, en.value});
  };

  // crossings, with the events they create along each piece
  struct Event {
    int index;
    double t;
    int back, fwd;
  };
  std::vector<std::vector<Event>> events(L.pieces.size());
  for (const auto& h : L.hits) {
    const auto& A = L.segs[h.sa];
    const auto& B = L.segs[h.sb];
    const int x = d.add_node(NodeKind::crossing, 4, d.next_id());
    const auto& xp = d.node(x).ports;
    const bool ccw = cross(sub(A.b, A.a), sub(B.b, B.a)) > 0;
    // A leaves through 0 and arrives through 2; B takes 1 and 3
    events[A.piece].push_back({A.index, h.ta, xp[2], xp[0]});
    events[B.piece].push_back({B.index, h.tb, ccw ? xp[3] : xp[1], ccw ? xp[1] : xp[3]});
    d.set_over(x, h.a_over ? 0 : 1);
  }
  for (int pi = 0; pi < static_cast<int>(L.pieces.size()); ++pi) {
    auto& ev = events[pi];
    std::sort(ev.begin(), ev.end(),
              [](const Event& a, const Event& b) { return a.index != b.index ? a.index < b.index : a.t < b.t; });
    int from = port_at(pi, false);
    for (const auto& x : ev) {
      d.connect(from, x.back);
      from = x.fwd;
    }
    d.connect(from, port_at(pi, true));
  }
  return d;
}

Tridiagram tridiagram_of(const PeriodicEmbedding& e) {
  Tridiagram t;
  for (int a = 1; a <= 3; ++a) t.diagrams[a - 1] = project(e, a);
  return t;
}

}  // namespace periodica
