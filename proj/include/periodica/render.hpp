#pragma once

#include <string>

#include "periodica/diagram.hpp"

namespace periodica {

// Sizes in SVG user units.
struct RenderStyle {
  double size = 320;          // side of the square
  double margin = 24;
  double stroke = 2;
  double marker_radius = 4.5;
  double gap = 7;             // break left in an under strand on each side of a crossing
  double node_spread = 14;    // distance from a node's centre to where its arcs attach

  // Throws std::invalid_argument unless every dimension is positive.
  void check() const;
};

// A drawing of the diagram in its square. Nodes are placed by a Tutte-style
// barycentric layout with the punctures fixed on the frame; components away
// from the frame sit on small circles. Layout affects the picture only.
// Crossings are <g class="crossing">, markers draw a filled dot and an open
// circle, vertices are discs.
std::string render_svg(const SquareDiagram& d, const RenderStyle& style = {});

// The three diagrams side by side, one nested <svg> each.
std::string render_svg(const Tridiagram& t, const RenderStyle& style = {});

}  // namespace periodica
