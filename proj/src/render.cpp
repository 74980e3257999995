#include "periodica/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace periodica {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Pt {
  double x = 0, y = 0;
};
Pt operator+(Pt a, Pt b) { return {a.x + b.x, a.y + b.y}; }
Pt operator-(Pt a, Pt b) { return {a.x - b.x, a.y - b.y}; }
Pt operator*(Pt a, double k) { return {a.x * k, a.y * k}; }
double norm(Pt a) { return std::hypot(a.x, a.y); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string pt(Pt p) { return num(p.x) + "," + num(p.y); }

class Layout {
 public:
  Layout(const SquareDiagram& d, const RenderStyle& st) : d_(d), st_(st) {
    place_punctures();
    place_nodes();
    orient_ports();
  }

  // Screen position of a node centre.
  Pt centre(int node) const { return screen(pos_[node]); }
  // Where an arc leaves a port, and the direction it leaves in (screen units).
  Pt attach(int port) const {
    const auto& o = d_.owner(port);
    if (o.puncture) return screen(puncture_pos_[o.index]);
    return centre(o.index) + dir(port) * st_.node_spread;
  }
  Pt dir(int port) const {
    const auto& o = d_.owner(port);
    if (o.puncture) {
      switch (d_.puncture(o.index).side) {
        case Side::left: return {1, 0};
        case Side::right: return {-1, 0};
        case Side::bottom: return {0, -1};
        case Side::top: return {0, 1};
      }
    }
    const double a = angle_[port];
    return {std::cos(a), -std::sin(a)};
  }
  Pt screen(Pt u) const { return {st_.margin + u.x * st_.size, st_.margin + (1 - u.y) * st_.size}; }

 private:
  void place_punctures() {
    puncture_pos_.resize(d_.punctures().size());
    for (std::size_t i = 0; i < d_.punctures().size(); ++i) {
      const auto& p = d_.puncture(i);
      const double t = (p.slot + 1.0) / (d_.puncture_count(p.side) + 1.0);
      switch (p.side) {
        case Side::left: puncture_pos_[i] = {0, t}; break;
        case Side::right: puncture_pos_[i] = {1, t}; break;
        case Side::bottom: puncture_pos_[i] = {t, 0}; break;
        case Side::top: puncture_pos_[i] = {t, 1}; break;
      }
    }
  }

  void place_nodes() {
    const int n = static_cast<int>(d_.nodes().size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::vector<char> anchored(n, 0);
    for (int v = 0; v < n; ++v)
      for (int p : d_.node(v).ports) {
        const int q = d_.mate(p);
        if (q < 0) continue;
        const auto& o = d_.owner(q);
        if (o.puncture)
          anchored[v] = 1;
        else
          parent[find(v)] = find(o.index);
      }
    std::vector<char> comp_anchored(n, 0);
    for (int v = 0; v < n; ++v)
      if (anchored[v]) comp_anchored[find(v)] = 1;

    pos_.assign(n, {0.5, 0.5});
    // components away from the frame go on small circles
    std::vector<int> floating;
    for (int v = 0; v < n; ++v)
      if (find(v) == v && !comp_anchored[v]) floating.push_back(v);
    for (std::size_t j = 0; j < floating.size(); ++j) {
      const double a = 2 * kPi * j / floating.size() + kPi / 4;
      const Pt c = floating.size() == 1 ? Pt{0.5, 0.5} : Pt{0.5 + 0.28 * std::cos(a), 0.5 + 0.28 * std::sin(a)};
      std::vector<int> members;
      for (int v = 0; v < n; ++v)
        if (find(v) == floating[j]) members.push_back(v);
      const double r = members.size() == 1 ? 0 : 0.1;
      for (std::size_t i = 0; i < members.size(); ++i) {
        const double b = 2 * kPi * i / members.size();
        pos_[members[i]] = {c.x + r * std::cos(b), c.y + r * std::sin(b)};
      }
    }
    // barycentric placement of the rest, punctures fixed
    for (int it = 0; it < 500; ++it)
      for (int v = 0; v < n; ++v) {
        if (!comp_anchored[find(v)]) continue;
        Pt sum;
        int k = 0;
        for (int p : d_.node(v).ports) {
          const int q = d_.mate(p);
          if (q < 0) continue;
          const auto& o = d_.owner(q);
          if (o.puncture) {
            sum = sum + puncture_pos_[o.index];
          } else if (o.index != v) {
            sum = sum + pos_[o.index];
          } else {
            continue;
          }
          ++k;
        }
        if (k > 0) pos_[v] = sum * (1.0 / k);
      }
    // pull apart nodes that landed on the same spot
    for (int v = 0; v < n; ++v) {
      int clash = 0;
      for (int u = 0; u < v; ++u)
        if (norm(pos_[u] - pos_[v]) < 1e-3) ++clash;
      if (clash > 0) {
        const double a = 2.4 * clash;
        pos_[v] = pos_[v] + Pt{std::cos(a), std::sin(a)} * (0.07 * std::sqrt(clash));
      }
    }
  }

  // Ports keep their counterclockwise order at even spacing; the common
  // rotation follows the directions to the arcs' other ends.
  void orient_ports() {
    angle_.assign(d_.port_count(), 0);
    for (std::size_t v = 0; v < d_.nodes().size(); ++v) {
      const auto& ports = d_.node(v).ports;
      const int k = static_cast<int>(ports.size());
      double sx = 0, sy = 0;
      for (int i = 0; i < k; ++i) {
        const int q = d_.mate(ports[i]);
        if (q < 0) continue;
        const auto& o = d_.owner(q);
        const Pt target = o.puncture ? puncture_pos_[o.index] : pos_[o.index];
        const Pt delta = target - pos_[v];
        if (norm(delta) < 1e-9) continue;
        const double want = std::atan2(delta.y, delta.x) - 2 * kPi * i / k;
        sx += std::cos(want);
        sy += std::sin(want);
      }
      const double base = (sx == 0 && sy == 0) ? 0 : std::atan2(sy, sx);
      for (int i = 0; i < k; ++i) angle_[ports[i]] = base + 2 * kPi * i / k;
    }
  }

  const SquareDiagram& d_;
  const RenderStyle& st_;
  std::vector<Pt> puncture_pos_, pos_;
  std::vector<double> angle_;
};

void draw(std::ostringstream& out, const SquareDiagram& d, const RenderStyle& st) {
  const Layout lay(d, st);
  const double side = st.size + 2 * st.margin;
  out << "<rect class=\"frame\" x=\"" << num(st.margin) << "\" y=\"" << num(st.margin) << "\" width=\""
      << num(st.size) << "\" height=\"" << num(st.size) << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  if (d.axis() > 0)
    out << "<text x=\"" << num(st.margin) << "\" y=\"" << num(st.margin * 0.7) << "\" font-size=\"12\">axis "
        << d.axis() << "</text>\n";

  out << "<g class=\"arcs\" fill=\"none\" stroke=\"black\" stroke-width=\"" << num(st.stroke) << "\">\n";
  for (int p = 0; p < d.port_count(); ++p) {
    const int q = d.mate(p);
    if (q < p) continue;
    const Pt a = lay.attach(p), b = lay.attach(q);
    const double reach = std::max(st.node_spread, 0.35 * norm(b - a));
    const Pt c1 = a + lay.dir(p) * reach, c2 = b + lay.dir(q) * reach;
    out << "<path class=\"arc\" d=\"M" << pt(a) << " C" << pt(c1) << " " << pt(c2) << " " << pt(b) << "\"/>\n";
  }
  out << "</g>\n";

  for (std::size_t v = 0; v < d.nodes().size(); ++v) {
    const auto& n = d.node(v);
    const Pt c = lay.centre(static_cast<int>(v));
    switch (n.kind) {
      case NodeKind::crossing: {
        const int o = n.over & 1;
        auto port = [&](int i) { return n.ports[(o + i) % 4]; };
        out << "<g class=\"crossing\" data-id=\"" << n.id << "\" fill=\"none\" stroke=\"black\" stroke-width=\""
            << num(st.stroke) << "\">";
        out << "<path class=\"over\" d=\"M" << pt(lay.attach(port(0))) << " L" << pt(c) << " L"
            << pt(lay.attach(port(2))) << "\"/>";
        for (int i : {1, 3}) {
          const int p = port(i);
          const Pt stop = c + lay.dir(p) * std::min(st.gap, st.node_spread);
          out << "<path class=\"under\" d=\"M" << pt(lay.attach(p)) << " L" << pt(stop) << "\"/>";
        }
        out << "</g>\n";
        break;
      }
      case NodeKind::marker: {
        const double r = st.marker_radius;
        out << "<g class=\"marker\" data-id=\"" << n.id << "\">";
        out << "<path d=\"M" << pt(lay.attach(n.ports[kDot])) << " L" << pt(c) << " L"
            << pt(lay.attach(n.ports[kCircle])) << "\" fill=\"none\" stroke=\"black\" stroke-width=\""
            << num(st.stroke) << "\"/>";
        const Pt dot = c + lay.dir(n.ports[kDot]) * (r * 1.3);
        const Pt ring = c + lay.dir(n.ports[kCircle]) * (r * 1.3);
        out << "<circle class=\"dot\" cx=\"" << num(dot.x) << "\" cy=\"" << num(dot.y) << "\" r=\"" << num(r)
            << "\" fill=\"black\"/>";
        out << "<circle class=\"circle\" cx=\"" << num(ring.x) << "\" cy=\"" << num(ring.y) << "\" r=\"" << num(r)
            << "\" fill=\"white\" stroke=\"black\" stroke-width=\"" << num(st.stroke * 0.75) << "\"/>";
        out << "</g>\n";
        break;
      }
      case NodeKind::vertex: {
        out << "<g class=\"vertex\" data-id=\"" << n.id << "\">";
        out << "<path d=\"";
        for (int p : n.ports) out << "M" << pt(c) << " L" << pt(lay.attach(p)) << " ";
        out << "\" fill=\"none\" stroke=\"black\" stroke-width=\"" << num(st.stroke) << "\"/>";
        out << "<circle cx=\"" << num(c.x) << "\" cy=\"" << num(c.y) << "\" r=\"" << num(st.marker_radius * 1.3)
            << "\" fill=\"#c33\"/>";
        if (!n.label.empty()) out << "<title>" << escape(n.label) << "</title>";
        out << "</g>\n";
        break;
      }
    }
  }

  for (std::size_t i = 0; i < d.punctures().size(); ++i) {
    const auto& p = d.puncture(i);
    const Pt at = lay.attach(p.port);
    out << "<circle class=\"puncture\" cx=\"" << num(at.x) << "\" cy=\"" << num(at.y)
        << "\" r=\"2.5\" fill=\"#888\"><title>" << side_char(p.side) << p.slot << "</title></circle>\n";
  }
  for (int i = 0; i < d.free_loops(); ++i) {
    const double r = 6;
    out << "<circle class=\"free-loop\" cx=\"" << num(st.margin + 12 + i * 3 * r) << "\" cy=\""
        << num(side - st.margin - 12) << "\" r=\"" << num(r) << "\" fill=\"none\" stroke=\"black\" stroke-width=\""
        << num(st.stroke) << "\"/>\n";
  }
}

std::string header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n";
}

}  // namespace

void RenderStyle::check() const {
  for (double v : {size, margin, stroke, marker_radius, gap, node_spread})
    if (!(v > 0)) throw std::invalid_argument("render style dimensions must be positive");
}

std::string render_svg(const SquareDiagram& d, const RenderStyle& style) {
  style.check();
  const double side = style.size + 2 * style.margin;
  std::ostringstream out;
  out << header(side, side);
  draw(out, d, style);
  out << "</svg>\n";
  return out.str();
}

std::string render_svg(const Tridiagram& t, const RenderStyle& style) {
  style.check();
  const double side = style.size + 2 * style.margin;
  std::ostringstream out;
  out << header(3 * side, side);
  for (int a = 0; a < 3; ++a) {
    out << "<svg class=\"diagram\" x=\"" << num(a * side) << "\" y=\"0\" width=\"" << num(side) << "\" height=\""
        << num(side) << "\">\n";
    draw(out, t.diagrams[a], style);
    out << "</svg>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace periodica
