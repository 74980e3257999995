#pragma once

// The randomised move-engine checks, shared by the unit test and the
// acceptance run.
#include <array>
#include <random>
#include <string>
#include <vector>

#include "periodica/canonical.hpp"
#include "periodica/planar_map.hpp"
#include "support.hpp"

namespace support {

struct PropertyReport {
  int trials = 0;
  int failures = 0;
  std::vector<std::string> messages;  // the first few failures
  std::array<int, kMoveKinds> hits{};
};

inline int puncture_pairs(const SquareDiagram& d) {
  return d.puncture_count(Side::left) + d.puncture_count(Side::bottom);
}

// Random (diagram, move) pairs: the result is valid, the deltas are right,
// strand classes survive, some move of the same kind undoes it, and changing
// any crossing twice is the identity on a diagram with the same shadow.
inline PropertyReport move_properties(int total, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  MoveFilter walk;
  walk.max_crossings = 5;
  walk.max_markers = 4;
  walk.max_punctures = 6;
  MoveFilter pick = walk;
  pick.max_crossings = 7;
  pick.max_markers = 6;
  pick.max_punctures = 8;
  auto axis_of = [](Side s) { return (s == Side::left || s == Side::right) ? Vec3{1, 0, 0} : Vec3{0, 1, 0}; };

  PropertyReport rep;
  for (int trial = 0; trial < total; ++trial) {
    const auto d = random_diagram(rng, static_cast<int>(rng() % 9), walk);
    // bias the choice towards rarer kinds by picking a kind first
    std::vector<MoveApplication> moves;
    for (int attempt = 0; attempt < 4 && moves.empty(); ++attempt) {
      MoveFilter f = pick;
      f.kinds.fill(false);
      f.kinds[rng() % kMoveKinds] = true;
      moves = enumerate_moves(d, f);
    }
    if (moves.empty()) moves = enumerate_moves(d, pick);
    ++rep.trials;
    if (moves.empty()) {
      ++rep.failures;
      rep.messages.push_back("no move on\n" + to_pdg(d));
      continue;
    }
    const auto m = moves[rng() % moves.size()];
    const auto r = apply_enumerated(d, m);
    rep.hits[static_cast<int>(m.kind) - 1]++;

    bool ok = true;
    auto expect = [&](bool cond, const char* what) {
      if (cond) return;
      ok = false;
      if (rep.messages.size() < 3)
        rep.messages.push_back(std::string(what) + " after " + m.describe() + "\n" + to_pdg(d) + "result:\n" + to_pdg(r));
    };
    expect(validate(r).valid(), "invalid result");
    expect(r.crossings() == d.crossings() + m.d_crossings, "crossing delta");
    expect(r.markers() == d.markers() + m.d_markers, "marker delta");
    expect(puncture_pairs(r) == puncture_pairs(d) + m.d_punctures, "puncture delta");
    // equal sorted lists, so the number of closed strands is kept too
    expect(closed_strand_classes(r) == closed_strand_classes(d), "closed strand classes");

    int moved = -1;
    Vec3 shift{0, 0, 0};
    if (m.kind == MoveKind::R13) {
      moved = d.node(m.site[0]).id;
      shift = axis_of(static_cast<Side>(m.site[3]));
    } else if (m.kind == MoveKind::R12) {
      moved = d.node(m.site[0]).id;
      shift = {0, 0, 1};
    }
    const auto after = open_strands(r);
    const Vec3 back_shift{-shift[0], -shift[1], -shift[2]};
    expect(after == open_strands(d, moved, shift) || after == open_strands(d, moved, back_shift),
           "open strand classes up to a vertex potential");

    const auto code = canonical_code(d);
    bool undone = false;
    for (const auto& back : enumerate_moves(r, MoveFilter::only(m.kind)))
      if (canonical_code(apply_enumerated(r, back)) == code) {
        undone = true;
        break;
      }
    expect(undone, "no inverse move");

    for (std::size_t i = 0; i < r.nodes().size(); ++i) {
      if (r.node(static_cast<int>(i)).kind != NodeKind::crossing) continue;
      const auto once = change_crossing(r, static_cast<int>(i));
      expect(shadow_code(once) == shadow_code(r), "crossing change alters the shadow");
      expect(validate(once).valid(), "crossing change gives an invalid diagram");
      expect(to_pdg(change_crossing(once, static_cast<int>(i))) == to_pdg(r), "crossing change is not an involution");
    }
    if (!ok) ++rep.failures;
  }
  return rep;
}

}  // namespace support
