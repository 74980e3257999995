#include "periodica/text_format.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace periodica {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string_view text;
  int column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' &&
           line[j] != '#')
      ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

class BodyParser {
 public:
  void line(int lineno, const std::vector<Token>& t) {
    lineno_ = lineno;
    const auto key = t[0].text;
    if (key == "X") {
      crossing(t);
    } else if (key == "V") {
      vertex(t);
    } else if (key == "M") {
      marker(t);
    } else if (key == "P") {
      puncture(t);
    } else if (key == "A") {
      arc(t);
    } else if (key == "O") {
      expect_count(t, 2);
      d_.set_free_loops(integer(t[1], 0));
    } else if (key == "axis") {
      expect_count(t, 2);
      const int a = integer(t[1], 1);
      if (a > 3) fail(t[1], "axis must be 1, 2 or 3");
      d_.set_axis(a);
    } else {
      fail(t[0], "unknown record '" + std::string(key) + "'");
    }
  }

  SquareDiagram finish() { return std::move(d_); }

 private:
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(lineno_, t.column, msg);
  }

  void expect_count(const std::vector<Token>& t, std::size_t n) const {
    if (t.size() != n)
      fail(t.size() > n ? t[n] : t.back(),
           "expected " + std::to_string(n - 1) + " fields after '" + std::string(t[0].text) +
               "'");
  }

  int integer(const Token& t, int min) const {
    int v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size())
      fail(t, "expected an integer, got '" + std::string(t.text) + "'");
    if (v < min) fail(t, "value out of range");
    return v;
  }

  int new_node(const Token& id_tok, NodeKind kind, int arity) {
    const int id = integer(id_tok, 0);
    if (!ids_.insert({id, 0}).second) fail(id_tok, "duplicate node id " + std::to_string(id));
    return d_.add_node(kind, arity, id);
  }

  void name_port(const Token& t, int port) {
    if (!ports_.emplace(std::string(t.text), port).second)
      fail(t, "duplicate port name '" + std::string(t.text) + "'");
  }

  void crossing(const std::vector<Token>& t) {
    expect_count(t, 7);
    const int n = new_node(t[1], NodeKind::crossing, 4);
    for (int i = 0; i < 4; ++i) name_port(t[2 + i], d_.node(n).ports[i]);
    const auto o = t[6].text;
    if (o == "over=02")
      d_.set_over(n, 0);
    else if (o == "over=13")
      d_.set_over(n, 1);
    else
      fail(t[6], "expected over=02 or over=13");
  }

  void vertex(const std::vector<Token>& t) {
    if (t.size() < 2) fail(t[0], "vertex needs an id");
    std::size_t end = t.size();
    std::string label;
    if (end > 2 && t[end - 1].text.starts_with("label=")) {
      label = std::string(t[end - 1].text.substr(6));
      --end;
    }
    const int n = new_node(t[1], NodeKind::vertex, static_cast<int>(end - 2));
    for (std::size_t i = 2; i < end; ++i) name_port(t[i], d_.node(n).ports[i - 2]);
    if (!label.empty()) d_.set_label(n, label);
  }

  void marker(const std::vector<Token>& t) {
    expect_count(t, 4);
    const int n = new_node(t[1], NodeKind::marker, 2);
    name_port(t[2], d_.node(n).ports[kDot]);
    name_port(t[3], d_.node(n).ports[kCircle]);
  }

  void puncture(const std::vector<Token>& t) {
    expect_count(t, 4);
    Side s;
    if (t[1].text.size() != 1 || !side_from_char(t[1].text[0], s))
      fail(t[1], "expected an edge L, R, B or T");
    const int slot = integer(t[2], 0);
    const int k = d_.add_puncture(s, slot);
    name_port(t[3], d_.puncture(k).port);
  }

  int lookup(const Token& t) const {
    auto it = ports_.find(std::string(t.text));
    if (it == ports_.end()) fail(t, "undeclared port '" + std::string(t.text) + "'");
    return it->second;
  }

  void arc(const std::vector<Token>& t) {
    expect_count(t, 3);
    const int p = lookup(t[1]);
    const int q = lookup(t[2]);
    if (p == q) fail(t[2], "arc joins a port to itself");
    if (d_.mate(p) >= 0) fail(t[1], "port '" + std::string(t[1].text) + "' already has an arc");
    if (d_.mate(q) >= 0) fail(t[2], "port '" + std::string(t[2].text) + "' already has an arc");
    d_.connect(p, q);
  }

  SquareDiagram d_;
  std::unordered_map<std::string, int> ports_;
  std::map<int, int> ids_;
  int lineno_ = 0;
};

bool section_header(const std::vector<Token>& t) { return t[0].text == "---"; }

}  // namespace

PdgDocument parse_pdg(std::string_view text) {
  int lineno = 0;
  bool header = false;
  bool sections = false;
  std::array<bool, 3> seen{};
  std::vector<int> order;
  std::optional<BodyParser> single;
  std::array<std::optional<BodyParser>, 3> parts;
  BodyParser* current = nullptr;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    const auto t = tokenize(raw);
    if (t.empty()) continue;
    if (!header) {
      if (t[0].text != "pdg") throw ParseError(lineno, t[0].column, "expected header 'pdg 1'");
      if (t.size() != 2 || t[1].text != "1")
        throw ParseError(lineno, t.size() > 1 ? t[1].column : t[0].column,
                         "unsupported format version");
      header = true;
      continue;
    }
    if (section_header(t)) {
      if (t.size() != 3 || t[1].text != "diagram")
        throw ParseError(lineno, t[0].column, "expected '--- diagram <axis>'");
      const auto a = t[2].text;
      if (a.size() != 1 || a[0] < '1' || a[0] > '3')
        throw ParseError(lineno, t[2].column, "diagram axis must be 1, 2 or 3");
      const int axis = a[0] - '0';
      if (single) throw ParseError(lineno, t[0].column, "diagram section after single-diagram content");
      if (seen[axis - 1]) throw ParseError(lineno, t[2].column, "duplicate diagram section");
      seen[axis - 1] = true;
      sections = true;
      parts[axis - 1].emplace();
      current = &*parts[axis - 1];
      continue;
    }
    if (!sections && !single) {
      single.emplace();
      current = &*single;
    }
    current->line(lineno, t);
  }
  if (!header) throw ParseError(lineno, 1, "empty document, expected header 'pdg 1'");
  if (sections) {
    for (int i = 0; i < 3; ++i)
      if (!seen[i])
        throw ParseError(lineno, 1, "tridiagram is missing section for axis " + std::to_string(i + 1));
    Tridiagram tri;
    for (int i = 0; i < 3; ++i) {
      tri.diagrams[i] = parts[i]->finish();
      tri.diagrams[i].set_axis(i + 1);
    }
    return tri;
  }
  if (!single) single.emplace();
  return single->finish();
}

SquareDiagram parse_diagram(std::string_view text) {
  auto doc = parse_pdg(text);
  if (auto* d = std::get_if<SquareDiagram>(&doc)) return std::move(*d);
  throw ParseError(1, 1, "expected a single diagram, found a tridiagram");
}

Tridiagram parse_tridiagram(std::string_view text) {
  auto doc = parse_pdg(text);
  if (auto* t = std::get_if<Tridiagram>(&doc)) return std::move(*t);
  throw ParseError(1, 1, "expected a tridiagram with three diagram sections");
}

namespace {

int side_rank(Side s) { return static_cast<int>(s); }

void write_body(std::ostringstream& out, const SquareDiagram& d) {
  std::vector<int> name(d.port_count(), -1);
  int next = 0;
  for (const auto& n : d.nodes())
    for (int p : n.ports) name[p] = next++;
  std::vector<int> order(d.punctures().size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& pa = d.puncture(a);
    const auto& pb = d.puncture(b);
    if (pa.side != pb.side) return side_rank(pa.side) < side_rank(pb.side);
    return pa.slot < pb.slot;
  });
  for (int k : order) name[d.puncture(k).port] = next++;

  for (const auto& n : d.nodes()) {
    switch (n.kind) {
      case NodeKind::crossing:
        out << "X " << n.id;
        for (int p : n.ports) out << ' ' << name[p];
        out << (n.over == 0 ? " over=02" : " over=13") << '\n';
        break;
      case NodeKind::vertex:
        out << "V " << n.id;
        for (int p : n.ports) out << ' ' << name[p];
        if (!n.label.empty()) out << " label=" << n.label;
        out << '\n';
        break;
      case NodeKind::marker:
        out << "M " << n.id << ' ' << name[n.ports[kDot]] << ' ' << name[n.ports[kCircle]] << '\n';
        break;
    }
  }
  for (int k : order) {
    const auto& p = d.puncture(k);
    out << "P " << side_char(p.side) << ' ' << p.slot << ' ' << name[p.port] << '\n';
  }
  if (d.free_loops() > 0) out << "O " << d.free_loops() << '\n';
  std::vector<std::pair<int, int>> arcs;
  for (int p = 0; p < d.port_count(); ++p) {
    const int q = d.mate(p);
    if (q >= 0 && name[p] < name[q]) arcs.emplace_back(name[p], name[q]);
  }
  std::sort(arcs.begin(), arcs.end());
  for (auto [a, b] : arcs) out << "A " << a << ' ' << b << '\n';
}

}  // namespace

std::string to_pdg(const SquareDiagram& d) {
  std::ostringstream out;
  out << "pdg 1\n";
  if (d.axis() != 0) out << "axis " << d.axis() << '\n';
  write_body(out, d);
  return out.str();
}

std::string to_pdg(const Tridiagram& t) {
  std::ostringstream out;
  out << "pdg 1\n";
  for (int i = 0; i < 3; ++i) {
    out << "--- diagram " << (i + 1) << '\n';
    write_body(out, t.diagrams[i]);
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace periodica
