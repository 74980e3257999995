#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace periodica {

enum class NodeKind : std::uint8_t { crossing, vertex, marker };

// Edges of the unit square. Left/right punctures are identified slot by slot,
// as are bottom/top.
enum class Side : std::uint8_t { left, right, bottom, top };

constexpr Side opposite(Side s) {
  switch (s) {
    case Side::left: return Side::right;
    case Side::right: return Side::left;
    case Side::bottom: return Side::top;
    case Side::top: return Side::bottom;
  }
  return s;
}

char side_char(Side s);
bool side_from_char(char c, Side& out);

// Marker ports: the dot sits on the front face, the circle on the back face.
constexpr int kDot = 0;
constexpr int kCircle = 1;

struct Node {
  int id = 0;
  NodeKind kind = NodeKind::vertex;
  std::vector<int> ports;  // counterclockwise
  int over = 0;            // crossings only: 0 means ports 0/2 pass over, 1 means ports 1/3
  std::string label;       // vertices only, ignored by canonical codes
};

struct Puncture {
  Side side = Side::left;
  int slot = 0;
  int port = -1;
};

struct PortOwner {
  bool puncture = false;
  int index = -1;     // node or puncture index
  int position = 0;   // position in the node's rotation
};

class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A square diagram: a planar map drawn in the unit square with identified
// opposite edges. Ports are darts; each arc joins two ports. The model is
// permissive so that invalid inputs can be represented and reported on.
class SquareDiagram {
 public:
  int add_node(NodeKind kind, int arity, int id = -1);
  int add_puncture(Side side, int slot);
  void connect(int p, int q);
  void set_over(int node, int over) { nodes_.at(node).over = over & 1; }
  void set_label(int node, std::string label) { nodes_.at(node).label = std::move(label); }
  void set_axis(int axis) { axis_ = axis; }
  void set_free_loops(int n) { free_loops_ = n; }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Puncture>& punctures() const { return punctures_; }
  const Node& node(int i) const { return nodes_.at(i); }
  const Puncture& puncture(int i) const { return punctures_.at(i); }
  int port_count() const { return static_cast<int>(mate_.size()); }
  int mate(int p) const { return mate_.at(p); }
  const PortOwner& owner(int p) const { return owner_.at(p); }
  int free_loops() const { return free_loops_; }
  int axis() const { return axis_; }

  int node_index(int id) const;
  int next_id() const;
  int count(NodeKind kind) const;
  int crossings() const { return count(NodeKind::crossing); }
  int markers() const { return count(NodeKind::marker); }
  int vertices() const { return count(NodeKind::vertex); }
  int puncture_count(Side s) const;
  int puncture_at(Side s, int slot) const;
  int partner(int puncture) const;

  // True when the crossing's port at `position` belongs to the over strand.
  bool is_over(int node, int position) const {
    return position % 2 == nodes_.at(node).over;
  }

 private:
  std::vector<Node> nodes_;
  std::vector<Puncture> punctures_;
  std::vector<int> mate_;
  std::vector<PortOwner> owner_;
  int free_loops_ = 0;
  int axis_ = 0;
};

// Front, top and right projections: diagrams[i] is the projection along axis i+1.
struct Tridiagram {
  std::array<SquareDiagram, 3> diagrams;
};

}  // namespace periodica
