// SVG drawings.
#include "doctest.h"
#include "periodica/projection.hpp"
#include "periodica/render.hpp"
#include "periodica/search.hpp"
#include "periodica/tridiagram.hpp"
#include "support.hpp"

using namespace periodica;

namespace {

int count(const std::string& s, const std::string& what) {
  int n = 0;
  for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("an empty diagram is an empty frame") {
  const auto svg = render_svg(SquareDiagram{});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count(svg, "class=\"frame\"") == 1);
  CHECK(count(svg, "class=\"crossing\"") == 0);
  CHECK(count(svg, "class=\"arc\"") == 0);
}

TEST_CASE("a marker is one dot and one circle") {
  const auto svg = render_svg(parse_diagram("pdg 1\nM 1 d c\nA d c\n"));
  CHECK(count(svg, "class=\"marker\"") == 1);
  CHECK(count(svg, "class=\"dot\"") == 1);
  CHECK(count(svg, "class=\"circle\"") == 1);
  CHECK(count(svg, "fill=\"black\"/>") == 1);
}

TEST_CASE("crossings break the under strand") {
  const auto svg = render_svg(support::fixture("hopf.pdg"));
  CHECK(count(svg, "class=\"crossing\"") == 2);
  CHECK(count(svg, "class=\"over\"") == 2);
  CHECK(count(svg, "class=\"under\"") == 4);
  CHECK(count(svg, "class=\"arc\"") == 4);
  CHECK(count(svg, "<g") == count(svg, "</g>"));
}

TEST_CASE("punctures sit on the frame") {
  const auto d = support::fixture("thread-ring.pdg");
  const auto svg = render_svg(d);
  CHECK(count(svg, "class=\"puncture\"") == 2);
  CHECK(svg.find("<title>L0</title>") != std::string::npos);
  CHECK(svg.find("<title>R0</title>") != std::string::npos);
}

TEST_CASE("the simplified dia-c tridiagram draws no crossings") {
  const auto t = tridiagram_of(perturb_generic(load_net(read_file(support::data_path("nets/dia-c.net")))));
  const auto s = crossing_bound(t).simplified;
  const auto svg = render_svg(s);
  CHECK(count(svg, "class=\"diagram\"") == 3);
  CHECK(count(svg, "class=\"crossing\"") == 0);
  CHECK(count(svg, "class=\"marker\"") == s.diagrams[0].markers() + s.diagrams[1].markers() + s.diagrams[2].markers());
}

TEST_CASE("drawings are deterministic and styles are checked") {
  const auto d = support::fixture("thread-ring.pdg");
  CHECK(render_svg(d) == render_svg(parse_diagram(to_pdg(d))));
  RenderStyle bad;
  bad.gap = 0;
  CHECK_THROWS_AS(render_svg(d, bad), std::invalid_argument);
  const auto labelled = parse_diagram("pdg 1\nV 1 a b label=<x&y>\nA a b\n");
  CHECK(render_svg(labelled).find("&lt;x&amp;y&gt;") != std::string::npos);
}
