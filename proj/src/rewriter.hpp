#pragma once

#include <string>
#include <vector>

#include "periodica/diagram.hpp"

namespace periodica::detail {

// Local surgery on a diagram. Nodes and punctures can be killed, new ones
// added and ports relinked. Killed ports keep their old arcs; finish() joins
// live ports across chains of killed ports using the declared continuations,
// and counts chains that close up as free loops.
class Rewriter {
 public:
  explicit Rewriter(const SquareDiagram& d);

  int add_node(NodeKind kind, int arity, int over = 0);
  int port(int node, int position) const { return nodes_[node].ports[position]; }
  int add_puncture(Side side, int slot);
  int puncture_port(int k) const { return punct_[k].port; }
  int mate(int p) const { return mate_[p]; }

  void link(int p, int q);
  void kill_node(int n);
  void kill_puncture(int k);
  // p and q are killed ports joined by a strand running through the removed part.
  void through(int p, int q);
  // The live port `replacement` takes over the arc of the killed port `old`.
  void substitute(int old, int replacement);
  // Adds delta to the slot of every live puncture on `s` and its opposite edge
  // with slot >= from.
  void shift_slots(Side s, int from, int delta);
  void add_free_loops(int k) { free_loops_ += k; }

  SquareDiagram finish();

 private:
  struct N {
    int id;
    NodeKind kind;
    std::vector<int> ports;
    int over;
    std::string label;
    bool alive;
  };
  struct P {
    Side side;
    int slot;
    int port;
    bool alive;
  };
  int new_port(bool dead);

  std::vector<N> nodes_;
  std::vector<P> punct_;
  std::vector<int> mate_, through_;
  std::vector<char> dead_;
  int free_loops_ = 0;
  int axis_ = 0;
  int next_id_ = 0;
};

}  // namespace periodica::detail
