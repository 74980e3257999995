#pragma once

#include <string>

#include "periodica/diagram.hpp"

namespace periodica {

struct CodeOptions {
  bool include_over = true;     // false gives the shadow code
  bool include_labels = false;  // vertex labels are ignored by default
  bool slot_rotation = false;   // quotient by cyclic relabelling of slots
};

// Byte string that is equal for two diagrams exactly when they are the same
// labelled square diagram up to renaming of nodes and ports. Codes start with
// fixed-width counts (crossings, markers, vertices, puncture pairs, free
// loops) so that lexicographic order prefers fewer crossings.
using Code = std::string;

Code canonical_code(const SquareDiagram& d, const CodeOptions& options = {});
inline Code shadow_code(const SquareDiagram& d) {
  return canonical_code(d, CodeOptions{false, false, false});
}

std::string code_hex(const Code& code);

}  // namespace periodica
