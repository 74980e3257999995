#include "periodica/catalogue.hpp"

#include <map>
#include <random>
#include <sstream>
#include <tuple>

#include "periodica/canonical.hpp"
#include "periodica/text_format.hpp"

namespace periodica {

namespace {

const char* direction_name(Direction d) { return d == Direction::forward ? "forward" : "backward"; }

int size_of(const SquareDiagram& d) { return d.port_count(); }

}  // namespace

std::vector<CatalogueEntry> parse_catalogue(std::string_view text) {
  std::vector<CatalogueEntry> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  enum { outside, header, before, after } state = outside;
  CatalogueEntry cur;
  std::string body;
  int body_line = 0;
  auto fail = [&](const std::string& what) { throw ParseError(line_no, 1, what); };
  auto diagram = [&]() {
    try {
      return parse_diagram(body);
    } catch (const ParseError& e) {
      throw ParseError(body_line + e.line() - 1, e.column(), e.what());
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    std::string first;
    words >> first;
    if (state == outside) {
      if (first.empty() || first[0] == '#') continue;
      if (first != "move") fail("expected 'move'");
      std::string kind, dir, variant_word, delta_word;
      cur = {};
      if (!(words >> kind >> dir >> variant_word >> cur.variant >> delta_word >> cur.d_crossings >> cur.d_markers >>
            cur.d_punctures) ||
          variant_word != "variant" || delta_word != "delta")
        fail("malformed move header");
      if (!move_kind_from_name(kind, cur.kind)) fail("unknown move kind '" + kind + "'");
      if (dir != "forward" && dir != "backward") fail("direction must be forward or backward");
      cur.direction = dir == "forward" ? Direction::forward : Direction::backward;
      state = header;
    } else if (state == header) {
      if (first.empty()) continue;
      if (first != "before") fail("expected 'before'");
      body.clear();
      body_line = line_no + 1;
      state = before;
    } else if (first == "after" && state == before) {
      cur.before = diagram();
      body.clear();
      body_line = line_no + 1;
      state = after;
    } else if (first == "end" && state == after) {
      cur.after = diagram();
      out.push_back(std::move(cur));
      state = outside;
    } else {
      body += line;
      body += '\n';
    }
  }
  if (state != outside) fail("unterminated entry");
  return out;
}

std::string format_catalogue(const std::vector<CatalogueEntry>& entries) {
  std::ostringstream out;
  for (const auto& e : entries) {
    out << "move " << move_name(e.kind) << ' ' << direction_name(e.direction) << " variant " << e.variant << " delta "
        << e.d_crossings << ' ' << e.d_markers << ' ' << e.d_punctures << "\nbefore\n"
        << to_pdg(e.before) << "after\n"
        << to_pdg(e.after) << "end\n\n";
  }
  return out.str();
}

MoveFilter CatalogueOptions::default_caps() {
  MoveFilter f;
  f.max_crossings = 4;
  f.max_markers = 2;
  f.max_punctures = 4;
  f.max_ports = 24;
  return f;
}

std::vector<CatalogueEntry> generate_catalogue(const std::vector<SquareDiagram>& seeds, const CatalogueOptions& o) {
  using Key = std::tuple<int, int, int>;
  std::map<Key, std::pair<Code, CatalogueEntry>> best;
  std::mt19937_64 rng(o.seed);
  auto offer = [&](const SquareDiagram& d, const Code& code, const MoveApplication& m) {
    const Key key{static_cast<int>(m.kind), static_cast<int>(m.direction), m.variant};
    auto it = best.find(key);
    if (it != best.end()) {
      const auto& held = it->second;
      const int a = size_of(d), b = size_of(held.second.before);
      if (a > b || (a == b && code >= held.first)) return;
    }
    CatalogueEntry e;
    e.kind = m.kind;
    e.direction = m.direction;
    e.variant = m.variant;
    e.d_crossings = m.d_crossings;
    e.d_markers = m.d_markers;
    e.d_punctures = m.d_punctures;
    e.before = d;
    e.after = apply_enumerated(d, m);
    best[key] = {code, std::move(e)};
  };
  for (const auto& seed : seeds)
    for (int w = 0; w < o.walks; ++w) {
      SquareDiagram d = seed;
      for (int s = 0; s <= o.steps; ++s) {
        const auto moves = enumerate_moves(d, o.caps);
        if (moves.empty()) break;
        const Code code = canonical_code(d);
        for (const auto& m : moves) offer(d, code, m);
        d = apply_enumerated(d, moves[rng() % moves.size()]);
      }
    }
  std::vector<CatalogueEntry> out;
  for (auto& [key, v] : best) out.push_back(std::move(v.second));
  return out;
}

std::vector<std::string> verify_catalogue(const std::vector<CatalogueEntry>& entries) {
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const std::string name = "entry " + std::to_string(i + 1) + " (" + move_name(e.kind) + ' ' +
                             direction_name(e.direction) + " variant " + std::to_string(e.variant) + ")";
    const Code before = canonical_code(e.before), after = canonical_code(e.after);
    bool there = false, back = false;
    for (const auto& m : enumerate_moves(e.before, MoveFilter::only(e.kind)))
      if (m.direction == e.direction && m.variant == e.variant && m.d_crossings == e.d_crossings &&
          m.d_markers == e.d_markers && m.d_punctures == e.d_punctures &&
          canonical_code(apply_enumerated(e.before, m)) == after)
        there = true;
    for (const auto& m : enumerate_moves(e.after, MoveFilter::only(e.kind)))
      if (canonical_code(apply_enumerated(e.after, m)) == before) back = true;
    if (!there) problems.push_back(name + ": the move does not produce 'after'");
    if (!back) problems.push_back(name + ": no reverse move leads back to 'before'");
    if (e.after.crossings() - e.before.crossings() != e.d_crossings ||
        e.after.markers() - e.before.markers() != e.d_markers)
      problems.push_back(name + ": recorded deltas disagree with the diagrams");
  }
  return problems;
}

}  // namespace periodica
