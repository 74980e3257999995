#include "rewriter.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace periodica::detail {

Rewriter::Rewriter(const SquareDiagram& d)
    : mate_(d.port_count()), through_(d.port_count(), -1), dead_(d.port_count(), 0) {
  for (int p = 0; p < d.port_count(); ++p) mate_[p] = d.mate(p);
  for (const auto& n : d.nodes()) nodes_.push_back({n.id, n.kind, n.ports, n.over, n.label, true});
  for (const auto& p : d.punctures()) punct_.push_back({p.side, p.slot, p.port, true});
  free_loops_ = d.free_loops();
  axis_ = d.axis();
  next_id_ = d.next_id();
}

int Rewriter::new_port(bool dead) {
  mate_.push_back(-1);
  through_.push_back(-1);
  dead_.push_back(dead ? 1 : 0);
  return static_cast<int>(mate_.size()) - 1;
}

int Rewriter::add_node(NodeKind kind, int arity, int over) {
  N n{next_id_++, kind, {}, over & 1, {}, true};
  for (int i = 0; i < arity; ++i) n.ports.push_back(new_port(false));
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

int Rewriter::add_puncture(Side side, int slot) {
  punct_.push_back({side, slot, new_port(false), true});
  return static_cast<int>(punct_.size()) - 1;
}

void Rewriter::link(int p, int q) {
  mate_[p] = q;
  mate_[q] = p;
}

void Rewriter::kill_node(int n) {
  nodes_[n].alive = false;
  for (int p : nodes_[n].ports) dead_[p] = 1;
}

void Rewriter::kill_puncture(int k) {
  punct_[k].alive = false;
  dead_[punct_[k].port] = 1;
}

void Rewriter::through(int p, int q) {
  through_[p] = q;
  through_[q] = p;
}

void Rewriter::substitute(int old, int replacement) {
  const int v = new_port(true);
  link(v, replacement);
  through(old, v);
}

void Rewriter::shift_slots(Side s, int from, int delta) {
  for (auto& p : punct_)
    if (p.alive && (p.side == s || p.side == opposite(s)) && p.slot >= from) p.slot += delta;
}

SquareDiagram Rewriter::finish() {
  const int total = static_cast<int>(mate_.size());
  // Join live ports across killed ones.
  for (int x = 0; x < total; ++x) {
    if (dead_[x]) continue;
    int y = mate_[x];
    if (y < 0 || !dead_[y]) continue;
    int guard = total + 1;
    while (dead_[y]) {
      const int z = through_[y];
      if (z < 0 || --guard < 0) throw std::logic_error("rewrite left a strand without continuation");
      y = mate_[z];
    }
    link(x, y);
  }
  // Remaining continuation chains of killed ports are closed strands.
  std::vector<char> seen(total, 0);
  for (int s = 0; s < total; ++s) {
    if (!dead_[s] || through_[s] < 0 || seen[s]) continue;
    int y = s;
    bool closed = true;
    while (!seen[y]) {
      seen[y] = 1;
      const int z = through_[y];
      if (z < 0) {
        closed = false;
        break;
      }
      seen[z] = 1;
      const int w = mate_[z];
      if (w < 0 || !dead_[w]) {
        closed = false;
        break;
      }
      y = w;
    }
    if (closed && y == s) ++free_loops_;
  }

  SquareDiagram out;
  out.set_axis(axis_);
  out.set_free_loops(free_loops_);
  std::vector<int> map(total, -1);
  for (const auto& n : nodes_) {
    if (!n.alive) continue;
    const int k = out.add_node(n.kind, static_cast<int>(n.ports.size()), n.id);
    out.set_over(k, n.over);
    if (!n.label.empty()) out.set_label(k, n.label);
    for (std::size_t i = 0; i < n.ports.size(); ++i) map[n.ports[i]] = out.node(k).ports[i];
  }
  std::vector<int> order;
  for (std::size_t k = 0; k < punct_.size(); ++k)
    if (punct_[k].alive) order.push_back(static_cast<int>(k));
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (punct_[a].side != punct_[b].side) return punct_[a].side < punct_[b].side;
    return punct_[a].slot < punct_[b].slot;
  });
  for (int k : order) map[punct_[k].port] = out.puncture(out.add_puncture(punct_[k].side, punct_[k].slot)).port;
  for (int x = 0; x < total; ++x) {
    if (dead_[x] || map[x] < 0) continue;
    const int y = mate_[x];
    if (y < 0 || dead_[y] || map[y] < 0 || mate_[y] != x)
      throw std::logic_error("rewrite produced an inconsistent arc");
    if (x < y) out.connect(map[x], map[y]);
  }
  return out;
}

}  // namespace periodica::detail
