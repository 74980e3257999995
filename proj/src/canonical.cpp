#include "periodica/canonical.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace periodica {

namespace {

using Tokens = std::vector<std::uint16_t>;

class Encoder {
 public:
  Encoder(const SquareDiagram& d, const CodeOptions& o, const std::vector<int>& slot_of)
      : d_(d), o_(o), slot_of_(slot_of), label_(d.nodes().size(), -1), entry_(d.nodes().size(), 0) {}

  // Labels nodes reachable from the given puncture order, then BFS.
  void root_at_punctures(const std::vector<int>& punctures) {
    for (int k : punctures) discover(d_.mate(d_.puncture(k).port));
    drain();
  }

  void root_at_port(int port) {
    discover(port);
    drain();
  }

  void emit_punctures(const std::vector<int>& punctures, Tokens& out) const {
    for (int k : punctures) target(d_.mate(d_.puncture(k).port), out);
  }

  void emit_nodes(Tokens& out) const {
    for (int n : order_) {
      const auto& node = d_.node(n);
      const int k = static_cast<int>(node.ports.size());
      const int e = entry_[n];
      out.push_back(static_cast<std::uint16_t>(node.kind));
      out.push_back(static_cast<std::uint16_t>(k));
      switch (node.kind) {
        case NodeKind::crossing:
          out.push_back(o_.include_over ? static_cast<std::uint16_t>((node.over + e) % 2) : 0);
          break;
        case NodeKind::marker:
          out.push_back(static_cast<std::uint16_t>(e));
          break;
        case NodeKind::vertex:
          if (o_.include_labels) {
            out.push_back(static_cast<std::uint16_t>(node.label.size()));
            for (unsigned char c : node.label) out.push_back(c);
          } else {
            out.push_back(0);
          }
          break;
      }
      for (int r = 0; r < k; ++r) target(d_.mate(node.ports[(e + r) % k]), out);
    }
  }

  bool labelled(int node) const { return label_[node] >= 0; }

 private:
  void discover(int port) {
    if (port < 0) return;
    const auto& o = d_.owner(port);
    if (o.puncture || label_[o.index] >= 0) return;
    label_[o.index] = static_cast<int>(order_.size());
    entry_[o.index] = o.position;
    order_.push_back(o.index);
    queue_.push_back(o.index);
  }

  void drain() {
    while (!queue_.empty()) {
      const int n = queue_.front();
      queue_.pop_front();
      const auto& node = d_.node(n);
      const int k = static_cast<int>(node.ports.size());
      for (int r = 0; r < k; ++r) discover(d_.mate(node.ports[(entry_[n] + r) % k]));
    }
  }

  void target(int port, Tokens& out) const {
    if (port < 0) {
      out.push_back(0);
      return;
    }
    const auto& o = d_.owner(port);
    if (o.puncture) {
      out.push_back(2);
      out.push_back(static_cast<std::uint16_t>(d_.puncture(o.index).side));
      out.push_back(static_cast<std::uint16_t>(slot_of_[o.index]));
    } else {
      const int k = static_cast<int>(d_.node(o.index).ports.size());
      out.push_back(1);
      out.push_back(static_cast<std::uint16_t>(label_[o.index]));
      out.push_back(static_cast<std::uint16_t>((o.position - entry_[o.index] + k) % k));
    }
  }

  const SquareDiagram& d_;
  const CodeOptions& o_;
  const std::vector<int>& slot_of_;
  std::vector<int> label_, entry_, order_;
  std::deque<int> queue_;
};

Code to_bytes(const Tokens& t) {
  Code s;
  s.reserve(t.size() * 2);
  for (auto v : t) {
    s.push_back(static_cast<char>(v >> 8));
    s.push_back(static_cast<char>(v & 0xff));
  }
  return s;
}

Code encode(const SquareDiagram& d, const CodeOptions& o, int shift_lr, int shift_bt) {
  const int nlr = d.puncture_count(Side::left);
  const int nbt = d.puncture_count(Side::bottom);
  std::vector<int> slot_of(d.punctures().size());
  for (std::size_t k = 0; k < slot_of.size(); ++k) {
    const auto& p = d.puncture(k);
    const bool lr = p.side == Side::left || p.side == Side::right;
    const int n = lr ? nlr : nbt;
    const int shift = lr ? shift_lr : shift_bt;
    slot_of[k] = n > 0 ? (p.slot + shift) % n : p.slot;
  }
  std::vector<int> punctures(d.punctures().size());
  std::iota(punctures.begin(), punctures.end(), 0);
  std::sort(punctures.begin(), punctures.end(), [&](int a, int b) {
    const auto sa = d.puncture(a).side, sb = d.puncture(b).side;
    if (sa != sb) return sa < sb;
    return slot_of[a] < slot_of[b];
  });

  Tokens out = {static_cast<std::uint16_t>(d.crossings()), static_cast<std::uint16_t>(d.markers()),
                static_cast<std::uint16_t>(d.vertices()), static_cast<std::uint16_t>(nlr),
                static_cast<std::uint16_t>(nbt), static_cast<std::uint16_t>(d.free_loops())};

  Encoder main(d, o, slot_of);
  main.root_at_punctures(punctures);
  main.emit_punctures(punctures, out);
  main.emit_nodes(out);

  // Components away from the boundary: minimise over every starting port.
  std::vector<Code> floating;
  std::vector<bool> done(d.nodes().size(), false);
  for (std::size_t n = 0; n < d.nodes().size(); ++n) done[n] = main.labelled(static_cast<int>(n));
  for (std::size_t n = 0; n < d.nodes().size(); ++n) {
    if (done[n]) continue;
    Encoder probe(d, o, slot_of);
    probe.root_at_port(d.node(n).ports.empty() ? -1 : d.node(n).ports[0]);
    std::vector<int> members;
    for (std::size_t m = 0; m < d.nodes().size(); ++m)
      if (probe.labelled(static_cast<int>(m))) members.push_back(static_cast<int>(m));
    if (members.empty()) members.push_back(static_cast<int>(n));
    Code best;
    bool have = false;
    for (int m : members) {
      done[m] = true;
      const auto& ports = d.node(m).ports;
      if (ports.empty()) {
        Tokens t = {static_cast<std::uint16_t>(d.node(m).kind), 0, 0};
        best = to_bytes(t);
        have = true;
      }
      for (int p : ports) {
        Encoder e(d, o, slot_of);
        e.root_at_port(p);
        Tokens t;
        e.emit_nodes(t);
        Code c = to_bytes(t);
        if (!have || c < best) {
          best = std::move(c);
          have = true;
        }
      }
    }
    floating.push_back(std::move(best));
  }
  std::sort(floating.begin(), floating.end());
  out.push_back(static_cast<std::uint16_t>(floating.size()));
  Code code = to_bytes(out);
  for (const auto& f : floating) {
    const auto len = static_cast<std::uint16_t>(f.size() / 2);
    code.push_back(static_cast<char>(len >> 8));
    code.push_back(static_cast<char>(len & 0xff));
    code += f;
  }
  return code;
}

}  // namespace

Code canonical_code(const SquareDiagram& d, const CodeOptions& o) {
  if (!o.slot_rotation) return encode(d, o, 0, 0);
  const int nlr = std::max(1, d.puncture_count(Side::left));
  const int nbt = std::max(1, d.puncture_count(Side::bottom));
  Code best;
  for (int a = 0; a < nlr; ++a)
    for (int b = 0; b < nbt; ++b) {
      Code c = encode(d, o, a, b);
      if ((a == 0 && b == 0) || c < best) best = std::move(c);
    }
  return best;
}

std::string code_hex(const Code& code) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(code.size() * 2);
  for (unsigned char c : code) {
    s.push_back(digits[c >> 4]);
    s.push_back(digits[c & 15]);
  }
  return s;
}

}  // namespace periodica
