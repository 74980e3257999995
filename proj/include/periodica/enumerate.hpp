#pragma once

#include <vector>

#include "periodica/diagram.hpp"

namespace periodica {

// Bounds for exhaustive generation. Shadows carry no vertices and no free
// loops; puncture pairs count both edge pairs together.
struct ShadowBounds {
  int max_crossings = 3;
  int max_markers = 2;
  int max_punctures = 2;
  int max_ports = 16;
};

// Every valid shadow within the bounds, one per shadow code, in code order.
// Crossings come with over = 0.
std::vector<SquareDiagram> enumerate_shadows(const ShadowBounds& b = {});

// Every over/under assignment of the shadows, one per canonical code, in
// code order.
std::vector<SquareDiagram> enumerate_diagrams(const ShadowBounds& b = {});

}  // namespace periodica
