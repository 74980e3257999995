#pragma once

#include <string>
#include <vector>

#include "periodica/diagram.hpp"

namespace periodica {

// Combinatorial map of a structurally sound diagram, including the boundary
// of the square. Darts 0..ports-1 are the diagram's ports; the remaining darts
// run along the boundary between consecutive punctures. Map vertices are the
// nodes followed by the punctures.
class PlanarMap {
 public:
  explicit PlanarMap(const SquareDiagram& d);

  int darts() const { return static_cast<int>(mate_.size()); }
  int mate(int dart) const { return mate_[dart]; }
  int rot_next(int dart) const { return rot_next_[dart]; }
  int rot_prev(int dart) const { return rot_prev_[dart]; }
  // Faces keep the traversal on their left: next(d) = rot_prev(mate(d)).
  int face(int dart) const { return face_[dart]; }
  int face_count() const { return static_cast<int>(face_darts_.size()); }
  const std::vector<int>& face_darts(int f) const { return face_darts_[f]; }
  int component(int map_vertex) const { return component_[map_vertex]; }
  int component_count() const { return component_count_; }
  int boundary_component() const { return boundary_component_; }

  // Punctures in counterclockwise order around the square.
  const std::vector<int>& boundary_cycle() const { return cycle_; }
  int cycle_position(int puncture) const { return cycle_pos_[puncture]; }
  // Boundary dart leaving the puncture at `pos` towards the next one; the
  // square's interior is on its left.
  int boundary_dart(int pos) const;
  // Interior face touching the gap before slot `gap` on edge `s`, or -1 when
  // the diagram has no punctures.
  int gap_face(Side s, int gap) const;
  // Face containing the corner between ports rot_prev(p) and p of a node.
  int corner_face(int port) const { return face_[rot_prev_[port]]; }

 private:
  int ports_ = 0;
  std::vector<int> mate_, rot_next_, rot_prev_, face_, component_;
  std::vector<std::vector<int>> face_darts_;
  std::vector<int> cycle_, cycle_pos_;
  std::vector<std::vector<int>> gap_face_;  // by side, by gap
  int component_count_ = 0;
  int boundary_component_ = -1;
};

// Position of a slot along the counterclockwise boundary: bottom and right
// edges run with increasing slot, top and left against it.
inline bool ccw_increasing(Side s) { return s == Side::bottom || s == Side::right; }

struct RuleResult {
  std::string rule;
  bool ok = true;
  std::string message;
};

struct ValidationReport {
  std::vector<std::string> errors;  // structural problems that block analysis
  std::vector<RuleResult> rules;
  bool valid() const;
};

ValidationReport validate(const SquareDiagram& d);
// Throws PreconditionError naming the first failure.
void require_valid(const SquareDiagram& d);

}  // namespace periodica
