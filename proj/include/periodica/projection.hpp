#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "periodica/diagram.hpp"

namespace periodica {

using Point3 = std::array<double, 3>;

struct NetVertex {
  std::string label;
  Point3 pos{};  // fractional, in [0,1)
};

// An edge from vertex a to the copy of vertex b translated by `offset`.
// Interior points are in the same unwrapped fractional frame as a.
struct NetEdge {
  int a = 0, b = 0;
  std::array<int, 3> offset{};
  std::vector<Point3> via;
};

// A unit cell of a 3-periodic embedding. The cell parameters are kept for
// reference; all geometry works in fractional coordinates, i.e. on the
// rectified unit cube.
struct PeriodicEmbedding {
  std::array<double, 6> cell{1, 1, 1, 90, 90, 90};
  std::vector<NetVertex> vertices;
  std::vector<NetEdge> edges;
};

class NetError : public std::runtime_error {
 public:
  NetError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Reads `cell`, `vertex <label> x y z` and
// `edge <a> <b> dx dy dz [via x y z [x y z ...]]` records; `#` starts a comment.
PeriodicEmbedding load_net(std::string_view text);

struct GenericityViolation {
  int axis = 0;
  std::string rule;  // "1".."9" after the projection rules, or "depth"
  std::string detail;
};

// Every way the embedding fails to project regularly along `axis` (1..3), or
// along all three axes when axis is 0. Empty means generic.
std::vector<GenericityViolation> genericity_violations(const PeriodicEmbedding& e, int axis = 0);

class GenericityError : public std::runtime_error {
 public:
  explicit GenericityError(GenericityViolation v)
      : std::runtime_error("not generic along axis " + std::to_string(v.axis) + ": rule " +
                           v.rule + ": " + v.detail),
        violation(std::move(v)) {}
  GenericityViolation violation;
};

struct PerturbOptions {
  std::uint64_t seed = 1;
  double eps = 1e-3;
  int max_tries = 64;
};

// Returns e unchanged when it is already generic. Otherwise gives every
// straight edge its midpoint as an interior point, jitters vertices and
// interior points by at most eps, retrying with fresh jitter, and throws
// GenericityError with the first violation of the last try on failure.
PeriodicEmbedding perturb_generic(const PeriodicEmbedding& e, const PerturbOptions& o = {});

// Projection along cell axis `axis` (1..3) onto the face at coordinate 1.
// Diagram axes (right, up) are (y, z), (z, x) and (x, y); larger depth passes over.
SquareDiagram project(const PeriodicEmbedding& e, int axis);

Tridiagram tridiagram_of(const PeriodicEmbedding& e);

}  // namespace periodica
