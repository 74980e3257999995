#pragma once

#include <array>
#include <string>
#include <vector>

#include "periodica/diagram.hpp"

namespace periodica {

// The thirteen moves of a square diagram. R1-R3 are the planar Reidemeister
// moves, R4-R9 move strands, markers and crossings past the faces, edges and
// corners of the cell, and R10-R13 involve vertices.
enum class MoveKind : std::uint8_t { R1 = 1, R2, R3, R4, R5, R6, R7, R8, R9, R10, R11, R12, R13 };
constexpr int kMoveKinds = 13;

// Forward moves do not grow the diagram; backward moves do.
enum class Direction : std::uint8_t { forward, backward };

std::string move_name(MoveKind k);
bool move_kind_from_name(const std::string& name, MoveKind& out);

// A concrete move on a concrete diagram. `site` holds node indices, port
// indices or edge numbers of the diagram it was enumerated on; its layout is
// specific to each kind. Deltas predict the change in crossings, markers and
// puncture pairs.
struct MoveApplication {
  MoveKind kind = MoveKind::R1;
  Direction direction = Direction::forward;
  std::vector<int> site;
  int variant = 0;
  int d_crossings = 0;
  int d_markers = 0;
  int d_punctures = 0;

  bool operator==(const MoveApplication& o) const {
    return kind == o.kind && direction == o.direction && site == o.site && variant == o.variant;
  }
  std::string describe() const;
};

struct MoveFilter {
  std::array<bool, kMoveKinds> kinds{true, true, true, true, true, true, true,
                                     true, true, true, true, true, true};
  bool forward = true;
  bool backward = true;
  // Limits on the result; negative means unlimited.
  int max_crossings = -1;
  int max_markers = -1;
  int max_punctures = -1;  // puncture pairs, both edge pairs together
  int max_ports = -1;      // arc ends

  static MoveFilter only(MoveKind k);
};

// Enumerates every applicable move in a fixed order. Requires a valid diagram.
std::vector<MoveApplication> enumerate_moves(const SquareDiagram& d,
                                             const MoveFilter& filter = {});

// Applies a move after checking it is applicable; throws PreconditionError
// otherwise. Node ids of untouched nodes are preserved.
SquareDiagram apply_move(const SquareDiagram& d, const MoveApplication& m);

// Applies a move produced by enumerate_moves on the same diagram, unchecked.
SquareDiagram apply_enumerated(const SquareDiagram& d, const MoveApplication& m);

// The untangling operation: swaps over and under at one crossing.
SquareDiagram change_crossing(const SquareDiagram& d, int node_index);

}  // namespace periodica
