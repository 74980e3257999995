#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "periodica/diagram.hpp"

namespace periodica {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

using PdgDocument = std::variant<SquareDiagram, Tridiagram>;

PdgDocument parse_pdg(std::string_view text);
SquareDiagram parse_diagram(std::string_view text);    // rejects tridiagrams
Tridiagram parse_tridiagram(std::string_view text);    // rejects single diagrams

// Canonical formatting: ports are renamed to integers in declaration order,
// punctures sorted by edge and slot, arcs sorted by their first port.
std::string to_pdg(const SquareDiagram& d);
std::string to_pdg(const Tridiagram& t);

std::string read_file(const std::string& path);

}  // namespace periodica
