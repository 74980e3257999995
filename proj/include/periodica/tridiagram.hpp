#pragma once

#include <array>

#include "periodica/diagram.hpp"
#include "periodica/planar_map.hpp"

namespace periodica {

using Triplet = std::array<int, 3>;

// Crossing counts of the front, top and right diagrams.
Triplet triplet(const Tridiagram& t);

// Per-diagram validity plus consistency between the three projections of one
// embedding: strands crossing the faces normal to an axis appear as markers in
// that axis' diagram and as puncture pairs in the other two, and the closed
// strands carry the same homology classes everywhere.
ValidationReport check_tridiagram(const Tridiagram& t);

}  // namespace periodica
