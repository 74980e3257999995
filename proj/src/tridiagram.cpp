#include "periodica/tridiagram.hpp"

#include "periodica/strands.hpp"

namespace periodica {

Triplet triplet(const Tridiagram& t) {
  return {t.diagrams[0].crossings(), t.diagrams[1].crossings(), t.diagrams[2].crossings()};
}

ValidationReport check_tridiagram(const Tridiagram& t) {
  ValidationReport out;
  bool structural = true;
  for (int i = 0; i < 3; ++i) {
    const auto r = validate(t.diagrams[i]);
    const std::string tag = "diagram " + std::to_string(i + 1) + ": ";
    for (const auto& e : r.errors) out.errors.push_back(tag + e);
    for (const auto& rule : r.rules) {
      if (!rule.ok) structural = false;
      out.rules.push_back({tag + "rule " + rule.rule, rule.ok, rule.message});
    }
    if (!r.errors.empty()) structural = false;
  }
  if (!structural) return out;

  RuleResult faces{"faces", true, ""};
  for (int a = 0; a < 3; ++a) {
    const int m = t.diagrams[a].markers();
    const int bt = t.diagrams[(a + 1) % 3].puncture_count(Side::bottom);
    const int lr = t.diagrams[(a + 2) % 3].puncture_count(Side::left);
    if (m != bt || m != lr) {
      faces.ok = false;
      faces.message = "faces normal to axis " + std::to_string(a + 1) + ": " + std::to_string(m) +
                      " markers, " + std::to_string(bt) + " and " + std::to_string(lr) +
                      " puncture pairs";
    }
  }
  out.rules.push_back(faces);

  RuleResult classes{"closed strands", true, ""};
  std::array<std::vector<Vec3>, 3> cls;
  for (int i = 0; i < 3; ++i) {
    auto d = t.diagrams[i];
    d.set_axis(i + 1);
    cls[i] = closed_strand_classes(d);
  }
  if (cls[0] != cls[1] || cls[0] != cls[2]) {
    classes.ok = false;
    classes.message = "closed strand homology classes differ between diagrams";
  }
  out.rules.push_back(classes);
  return out;
}

}  // namespace periodica
