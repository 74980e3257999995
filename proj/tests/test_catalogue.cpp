// The shipped move catalogue.
#include <filesystem>
#include <set>

#include "doctest.h"
#include "periodica/catalogue.hpp"
#include "support.hpp"

using namespace periodica;

namespace {

std::vector<CatalogueEntry> shipped() { return parse_catalogue(read_file(support::data_path("moves.catalogue"))); }

std::vector<SquareDiagram> fixture_seeds() {
  std::set<std::string> names;
  for (const auto& p : std::filesystem::directory_iterator(support::data_path("fixtures")))
    if (p.path().extension() == ".pdg") names.insert(p.path().filename().string());
  std::vector<SquareDiagram> out;
  for (const auto& n : names) out.push_back(support::fixture(n));
  return out;
}

}  // namespace

TEST_CASE("every catalogue entry replays") {
  const auto entries = shipped();
  CHECK(entries.size() >= 20);
  for (const auto& problem : verify_catalogue(entries)) FAIL_CHECK(problem);
}

TEST_CASE("the catalogue covers every kind") {
  std::set<std::pair<MoveKind, Direction>> seen;
  for (const auto& e : shipped()) seen.insert({e.kind, e.direction});
  for (int k = 1; k <= kMoveKinds; ++k) {
    INFO("R" << k);
    CHECK(seen.count({static_cast<MoveKind>(k), Direction::forward}));
  }
  for (MoveKind k : {MoveKind::R1, MoveKind::R2, MoveKind::R4, MoveKind::R5, MoveKind::R6, MoveKind::R10,
                     MoveKind::R11, MoveKind::R13})
    CHECK(seen.count({k, Direction::backward}));
}

TEST_CASE("the catalogue matches the engine") {
  // regenerating from the fixtures must reproduce the shipped entries exactly
  CHECK(format_catalogue(generate_catalogue(fixture_seeds())) == format_catalogue(shipped()));
}

TEST_CASE("a tampered entry is caught") {
  auto entries = shipped();
  REQUIRE_FALSE(entries.empty());
  entries[0].after = entries[0].before;
  CHECK_FALSE(verify_catalogue(entries).empty());
}

TEST_CASE("catalogue syntax errors") {
  CHECK_THROWS_AS(parse_catalogue("move R99 forward variant 0 delta 0 0 0\n"), ParseError);
  CHECK_THROWS_AS(parse_catalogue("move R1 forward variant 0 delta 0 0 0\nbefore\npdg 1\n"), ParseError);
  try {
    parse_catalogue("# x\nmove R1 forward variant 0 delta 0 0 0\nbefore\npdg 1\nQ 1\nafter\npdg 1\nend\n");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
  }
  CHECK(parse_catalogue("# only a comment\n").empty());
}
