#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "periodica/diagram.hpp"
#include "periodica/moves.hpp"

namespace periodica {

// One worked instance of a move: a small diagram on which the move applies
// and the diagram it produces. The engine itself is procedural; the
// catalogue pins its behaviour down as data that can be diffed and replayed.
struct CatalogueEntry {
  MoveKind kind = MoveKind::R1;
  Direction direction = Direction::forward;
  int variant = 0;
  int d_crossings = 0, d_markers = 0, d_punctures = 0;
  SquareDiagram before, after;
};

// Blocks of the form
//   move R2 forward variant 1 delta -2 0 0
//   before
//   <pdg>
//   after
//   <pdg>
//   end
std::vector<CatalogueEntry> parse_catalogue(std::string_view text);
std::string format_catalogue(const std::vector<CatalogueEntry>& entries);

// Walks moves from each seed and keeps, for every kind, direction and variant
// met, the instance with the smallest `before`. Deterministic in its inputs.
struct CatalogueOptions {
  std::uint64_t seed = 1;
  int walks = 20;  // per seed diagram
  int steps = 80;  // per walk
  MoveFilter caps = default_caps();
  static MoveFilter default_caps();
};
std::vector<CatalogueEntry> generate_catalogue(const std::vector<SquareDiagram>& seeds,
                                               const CatalogueOptions& o = {});

// Replays every entry: `before` must offer a move of the entry's kind,
// direction and variant with the recorded deltas leading to `after`, and
// `after` must offer a move of the same kind back. Returns one line per failure.
std::vector<std::string> verify_catalogue(const std::vector<CatalogueEntry>& entries);

}  // namespace periodica
