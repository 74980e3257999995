#include "periodica/diagram.hpp"

#include <algorithm>

namespace periodica {

char side_char(Side s) {
  switch (s) {
    case Side::left: return 'L';
    case Side::right: return 'R';
    case Side::bottom: return 'B';
    case Side::top: return 'T';
  }
  return '?';
}

bool side_from_char(char c, Side& out) {
  switch (c) {
    case 'L': out = Side::left; return true;
    case 'R': out = Side::right; return true;
    case 'B': out = Side::bottom; return true;
    case 'T': out = Side::top; return true;
    default: return false;
  }
}

int SquareDiagram::add_node(NodeKind kind, int arity, int id) {
  if (arity < 0) throw PreconditionError("negative arity");
  Node n;
  n.id = id < 0 ? next_id() : id;
  n.kind = kind;
  const int index = static_cast<int>(nodes_.size());
  for (int i = 0; i < arity; ++i) {
    n.ports.push_back(static_cast<int>(mate_.size()));
    mate_.push_back(-1);
    owner_.push_back({false, index, i});
  }
  nodes_.push_back(std::move(n));
  return index;
}

int SquareDiagram::add_puncture(Side side, int slot) {
  const int index = static_cast<int>(punctures_.size());
  const int port = static_cast<int>(mate_.size());
  mate_.push_back(-1);
  owner_.push_back({true, index, 0});
  punctures_.push_back({side, slot, port});
  return index;
}

void SquareDiagram::connect(int p, int q) {
  if (p < 0 || q < 0 || p >= port_count() || q >= port_count())
    throw PreconditionError("connect: port out of range");
  mate_[p] = q;
  mate_[q] = p;
}

int SquareDiagram::node_index(int id) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].id == id) return static_cast<int>(i);
  return -1;
}

int SquareDiagram::next_id() const {
  int m = 0;
  for (const auto& n : nodes_) m = std::max(m, n.id + 1);
  return m;
}

int SquareDiagram::count(NodeKind kind) const {
  return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(),
                                        [kind](const Node& n) { return n.kind == kind; }));
}

int SquareDiagram::puncture_count(Side s) const {
  return static_cast<int>(std::count_if(punctures_.begin(), punctures_.end(),
                                        [s](const Puncture& p) { return p.side == s; }));
}

int SquareDiagram::puncture_at(Side s, int slot) const {
  for (std::size_t i = 0; i < punctures_.size(); ++i)
    if (punctures_[i].side == s && punctures_[i].slot == slot) return static_cast<int>(i);
  return -1;
}

int SquareDiagram::partner(int puncture) const {
  const auto& p = punctures_.at(puncture);
  return puncture_at(opposite(p.side), p.slot);
}

}  // namespace periodica
