#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "periodica/moves.hpp"
#include "periodica/strands.hpp"
#include "periodica/text_format.hpp"

namespace support {

using namespace periodica;

inline std::string data_path(const std::string& rel) { return std::string(PERIODICA_DATA_DIR) + "/" + rel; }

inline SquareDiagram fixture(const std::string& name) {
  return parse_diagram(read_file(data_path("fixtures/" + name)));
}

// Small diagrams that between them contain every node kind.
inline std::vector<SquareDiagram> seeds() {
  return {
      fixture("thread.pdg"),
      fixture("thread-ring.pdg"),
      fixture("hopf.pdg"),
      // one vertex joined to itself across both edge pairs (square lattice)
      parse_diagram("pdg 1\nV 1 r t l b\nP L 0 pl\nP R 0 pr\nP B 0 pb\nP T 0 pt\n"
                    "A r pr\nA t pt\nA l pl\nA b pb\n"),
      // two vertices, a bond inside the cell and a bond across the right edge
      parse_diagram("pdg 1\nV 1 a b c\nV 2 d e f\nP L 0 pl\nP R 0 pr\nP B 0 pb\nP T 0 pt\n"
                    "A a d\nA b pt\nA c pl\nA e pb\nA f pr\n"),
      // a thread through the front face
      parse_diagram("pdg 1\nM 1 d c\nA d c\n"),
      // a diagonal thread hugging two corners
      parse_diagram("pdg 1\nP B 0 b\nP T 0 t\nP R 0 r\nP L 0 l\nA b r\nA l t\n"),
  };
}

// A random walk of moves from a random seed, kept inside the caps.
inline SquareDiagram random_diagram(std::mt19937_64& rng, int steps, const MoveFilter& caps) {
  const auto s = seeds();
  SquareDiagram d = s[rng() % s.size()];
  for (int i = 0; i < steps; ++i) {
    const auto moves = enumerate_moves(d, caps);
    if (moves.empty()) break;
    d = apply_enumerated(d, moves[rng() % moves.size()]);
  }
  return d;
}

// Open strands keyed by their end vertex ids, oriented from the smaller id.
using OpenKey = std::tuple<int, int, Vec3>;

inline std::multiset<OpenKey> open_strands(const SquareDiagram& d, int moved_id = -1,
                                           Vec3 shift = {0, 0, 0}) {
  std::multiset<OpenKey> out;
  for (const auto& s : strands(d)) {
    if (s.closed) continue;
    int a = d.node(s.start_node).id, b = s.end_node >= 0 ? d.node(s.end_node).id : -1;
    Vec3 v = s.displacement;
    for (int k = 0; k < 3; ++k) {
      if (b == moved_id) v[k] += shift[k];
      if (a == moved_id) v[k] -= shift[k];
    }
    if (b < a) {
      std::swap(a, b);
      v = {-v[0], -v[1], -v[2]};
    }
    if (a == b) v = normalise_sign(v);
    out.insert({a, b, v});
  }
  return out;
}

}  // namespace support
