#include <sstream>

#include "moves_common.hpp"
#include "periodica/canonical.hpp"

namespace periodica {

namespace detail {

Ctx::Ctx(const SquareDiagram& diagram)
    : d(diagram), map(diagram), nodes(static_cast<int>(diagram.nodes().size())) {
  if (!d.punctures().empty()) outer_face = map.face(map.boundary_dart(0) + 1);
}

int Ctx::comp_of_port(int p) const {
  if (p >= d.port_count()) return map.boundary_component();
  const auto& o = d.owner(p);
  return map.component(o.puncture ? nodes + o.index : o.index);
}

int Ctx::comp_of_face(int f) const { return comp_of_port(map.face_darts(f)[0]); }

bool Ctx::reaches(int dart, int face) const {
  if (map.face(dart) == face) return true;
  const int c = comp_of_port(dart);
  return floating(c) && c != comp_of_face(face);
}

bool Ctx::cofacial(int a, int b) const {
  if (map.face(a) == map.face(b)) return true;
  const int ca = comp_of_port(a), cb = comp_of_port(b);
  return ca != cb && (floating(ca) || floating(cb));
}

std::vector<int> Ctx::face_ports(int f) const {
  std::vector<int> out;
  for (int x : map.face_darts(f))
    if (x < d.port_count()) out.push_back(x);
  return out;
}

void offer(const Ctx& c, const MoveFilter& f, std::vector<MoveApplication>& out, MoveApplication m) {
  if (!f.kinds[static_cast<int>(m.kind) - 1]) return;
  if (m.direction == Direction::forward ? !f.forward : !f.backward) return;
  if (f.max_crossings >= 0 && c.d.crossings() + m.d_crossings > f.max_crossings) return;
  if (f.max_markers >= 0 && c.d.markers() + m.d_markers > f.max_markers) return;
  if (f.max_punctures >= 0) {
    const int pairs = c.d.puncture_count(Side::left) + c.d.puncture_count(Side::bottom);
    if (pairs + m.d_punctures > f.max_punctures) return;
  }
  if (f.max_ports >= 0 &&
      c.d.port_count() + 4 * m.d_crossings + 2 * m.d_markers + 2 * m.d_punctures > f.max_ports)
    return;
  out.push_back(std::move(m));
}

}  // namespace detail

using namespace detail;

std::string move_name(MoveKind k) { return "R" + std::to_string(static_cast<int>(k)); }

bool move_kind_from_name(const std::string& name, MoveKind& out) {
  for (int i = 1; i <= kMoveKinds; ++i)
    if (name == "R" + std::to_string(i)) {
      out = static_cast<MoveKind>(i);
      return true;
    }
  return false;
}

std::string MoveApplication::describe() const {
  std::ostringstream s;
  s << move_name(kind) << (direction == Direction::forward ? " forward" : " backward") << " site";
  for (int x : site) s << ' ' << x;
  s << " variant " << variant;
  return s.str();
}

MoveFilter MoveFilter::only(MoveKind k) {
  MoveFilter f;
  f.kinds.fill(false);
  f.kinds[static_cast<int>(k) - 1] = true;
  return f;
}

std::vector<MoveApplication> enumerate_moves(const SquareDiagram& d, const MoveFilter& f) {
  Ctx c(d);
  std::vector<MoveApplication> out;
  auto on = [&](MoveKind k) { return f.kinds[static_cast<int>(k) - 1]; };
  if (on(MoveKind::R1)) enum_r1(c, f, out);
  if (on(MoveKind::R2)) enum_r2(c, f, out);
  if (on(MoveKind::R3)) enum_r3(c, f, out);
  if (on(MoveKind::R4)) enum_slide(c, f, out, MoveKind::R4);
  if (on(MoveKind::R5)) enum_r5(c, f, out);
  if (on(MoveKind::R6)) enum_r6(c, f, out);
  if (on(MoveKind::R7)) enum_pass(c, f, out, MoveKind::R7);
  if (on(MoveKind::R8)) enum_r8(c, f, out);
  if (on(MoveKind::R9)) enum_pass(c, f, out, MoveKind::R9);
  if (on(MoveKind::R10)) enum_slide(c, f, out, MoveKind::R10);
  if (on(MoveKind::R11)) enum_r11(c, f, out);
  if (on(MoveKind::R12)) enum_r12(c, f, out);
  if (on(MoveKind::R13)) enum_pass(c, f, out, MoveKind::R13);
  return out;
}

SquareDiagram apply_enumerated(const SquareDiagram& d, const MoveApplication& m) {
  switch (m.kind) {
    case MoveKind::R1: return apply_r1(d, m);
    case MoveKind::R2: return apply_r2(d, m);
    case MoveKind::R3: return apply_r3(d, m);
    case MoveKind::R4:
    case MoveKind::R10: return apply_slide(d, m);
    case MoveKind::R5: return apply_r5(d, m);
    case MoveKind::R6: return apply_r6(d, m);
    case MoveKind::R7:
    case MoveKind::R9:
    case MoveKind::R13: return apply_pass(d, m);
    case MoveKind::R8: return apply_r8(d, m);
    case MoveKind::R11: return apply_r11(d, m);
    case MoveKind::R12: return apply_r12(d, m);
  }
  throw PreconditionError("unknown move kind");
}

SquareDiagram apply_move(const SquareDiagram& d, const MoveApplication& m) {
  require_valid(d);
  const auto candidates = enumerate_moves(d, MoveFilter::only(m.kind));
  for (const auto& c : candidates)
    if (c == m) return apply_enumerated(d, c);
  throw PreconditionError("move " + m.describe() + " does not apply to this diagram");
}

SquareDiagram change_crossing(const SquareDiagram& d, int node_index) {
  if (node_index < 0 || node_index >= static_cast<int>(d.nodes().size()) ||
      d.node(node_index).kind != NodeKind::crossing)
    throw PreconditionError("crossing change needs a crossing node");
  SquareDiagram out = d;
  out.set_over(node_index, 1 - d.node(node_index).over);
  return out;
}

}  // namespace periodica
