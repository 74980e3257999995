#pragma once

#include <vector>

#include "periodica/moves.hpp"
#include "periodica/planar_map.hpp"
#include "rewriter.hpp"

namespace periodica::detail {

// Read-only view used by the enumerators.
struct Ctx {
  explicit Ctx(const SquareDiagram& diagram);

  const SquareDiagram& d;
  PlanarMap map;
  int nodes = 0;

  int node_of(int p) const {
    const auto& o = d.owner(p);
    return o.puncture ? -1 : o.index;
  }
  int pos(int p) const { return d.owner(p).position; }
  int port(int node, int i) const {
    const auto& ps = d.node(node).ports;
    const int k = static_cast<int>(ps.size());
    return ps[((i % k) + k) % k];
  }
  int arity(int node) const { return static_cast<int>(d.node(node).ports.size()); }
  bool is(int node, NodeKind k) const { return node >= 0 && d.node(node).kind == k; }
  int puncture_of(int p) const {
    const auto& o = d.owner(p);
    return o.puncture ? o.index : -1;
  }

  int comp_of_port(int p) const;
  int comp_of_face(int f) const;
  bool floating(int comp) const { return comp != map.boundary_component(); }
  // A dart can reach a face if it lies on it, or if its component floats free
  // of the face's component and can be relocated there.
  bool reaches(int dart, int face) const;
  bool cofacial(int a, int b) const;
  bool outer(int face) const { return face == outer_face; }

  std::vector<int> face_ports(int f) const;
  int outer_face = -1;
};

// Port on a killed or live node at a position counted modulo the arity.
inline int rot(const SquareDiagram& d, int port, int delta) {
  const auto& o = d.owner(port);
  const auto& ps = d.node(o.index).ports;
  const int k = static_cast<int>(ps.size());
  return ps[(((o.position + delta) % k) + k) % k];
}

// Adds `m` to `out` when the filter admits it.
void offer(const Ctx& c, const MoveFilter& f, std::vector<MoveApplication>& out, MoveApplication m);

void enum_r1(const Ctx&, const MoveFilter&, std::vector<MoveApplication>&);
void enum_r2(const Ctx&, const MoveFilter&, std::vector<MoveApplication>&);
void enum_r3(const Ctx&, const MoveFilter&, std::vector<MoveApplication>&);
void enum_slide(const Ctx&, const MoveFilter&, std::vector<MoveApplication>&, MoveKind);
void enum_r5(const Ctx&, const MoveFilter&, std::vector<MoveApplication>&);
void enum_r6(const Ctx&, const MoveFilter&, std::vector<MoveApplication>&);
void enum_pass(const Ctx&, const MoveFilter&, std::vector<MoveApplication>&, MoveKind);
void enum_r8(const Ctx&, const MoveFilter&, std::vector<MoveApplication>&);
void enum_r11(const Ctx&, const MoveFilter&, std::vector<MoveApplication>&);
void enum_r12(const Ctx&, const MoveFilter&, std::vector<MoveApplication>&);

SquareDiagram apply_r1(const SquareDiagram&, const MoveApplication&);
SquareDiagram apply_r2(const SquareDiagram&, const MoveApplication&);
SquareDiagram apply_r3(const SquareDiagram&, const MoveApplication&);
SquareDiagram apply_slide(const SquareDiagram&, const MoveApplication&);
SquareDiagram apply_r5(const SquareDiagram&, const MoveApplication&);
SquareDiagram apply_r6(const SquareDiagram&, const MoveApplication&);
SquareDiagram apply_pass(const SquareDiagram&, const MoveApplication&);
SquareDiagram apply_r8(const SquareDiagram&, const MoveApplication&);
SquareDiagram apply_r11(const SquareDiagram&, const MoveApplication&);
SquareDiagram apply_r12(const SquareDiagram&, const MoveApplication&);

}  // namespace periodica::detail
