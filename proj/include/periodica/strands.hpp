#pragma once

#include <array>
#include <vector>

#include "periodica/diagram.hpp"

namespace periodica {

using Vec3 = std::array<int, 3>;

// A strand runs straight through crossings, from dot to circle through
// markers and across identified punctures; it ends only at vertices.
struct Strand {
  bool closed = false;
  std::vector<int> ports;   // ports left by the walk, in order
  Vec3 displacement{};      // diagram coordinates: right, up, towards the front face
  int start_node = -1;      // open strands: vertex indices at both ends
  int end_node = -1;
};

std::vector<Strand> strands(const SquareDiagram& d);

// Sign-normalised class: first nonzero coordinate positive.
Vec3 normalise_sign(Vec3 v);

// Maps diagram coordinates of the projection along `axis` (1..3) to cell axes.
Vec3 to_cell_axes(const Vec3& v, int axis);

// Sorted sign-normalised classes of the closed strands, in cell axes when the
// diagram's axis is known, else in diagram coordinates.
std::vector<Vec3> closed_strand_classes(const SquareDiagram& d);

}  // namespace periodica
