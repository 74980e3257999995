#pragma once

#include <array>
#include <atomic>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "periodica/canonical.hpp"
#include "periodica/diagram.hpp"
#include "periodica/moves.hpp"
#include "periodica/tridiagram.hpp"

namespace periodica {

// Limits for exploring R-equivalent diagrams. Caps on the explored states are
// relative to the diagram being simplified unless an absolute cap is set.
struct SimplifyBudget {
  int max_states = 20000;
  int max_extra_crossings = 1;
  int max_extra_markers = 1;
  int max_extra_punctures = 1;
  double time_limit = 0;  // seconds per exploration, 0 for none; a hit makes results timing dependent
  int max_crossings = -1;
  int max_markers = -1;
  int max_punctures = -1;
  int max_ports = -1;
  int threads = 0;  // 0 picks the hardware concurrency

  MoveFilter caps_for(const SquareDiagram& d) const;
};

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One state of an explored R-class: how it was reached from the class root.
struct Member {
  SquareDiagram diagram;
  Code code;
  int parent = -1;
  MoveApplication move;  // applied to the parent's diagram
};

struct Closure {
  std::vector<Member> members;  // breadth-first order, members[0] is the root
  bool exhaustive = true;
};

// Breadth-first exploration of the moves from d under the caps.
Closure explore(const SquareDiagram& d, const SimplifyBudget& b);

// The moves leading from the root of c to members[i].
std::vector<MoveApplication> path_to(const Closure& c, int i);

struct SimplifyResult {
  SquareDiagram diagram;
  bool exhaustive = true;
  int states = 0;  // states visited over all rounds
};

// Greedy reduction, then a breadth-first search for the lexicographically
// least canonical code, restarted from each improvement.
SimplifyResult simplify_ex(const SquareDiagram& d, const SimplifyBudget& b = {});
inline SquareDiagram simplify(const SquareDiagram& d, const SimplifyBudget& b = {}) {
  return simplify_ex(d, b).diagram;
}

// A floor on the crossings of every diagram reachable by moves and changes:
// vertex-disjoint cycles meet at least |det| times on the torus, summed over
// the best family of up to three cycles together with the closed strands.
int crossing_lower_bound(const SquareDiagram& d);

struct CrossingBound {
  Triplet triplet{};
  int c_value = 0;
  bool exhaustive = true;
  Tridiagram simplified;
};
CrossingBound crossing_bound(const Tridiagram& t, const SimplifyBudget& b = {});

// One untangling operation of a witness: from the current state, apply
// `moves`, change the crossing with node id `crossing_id`, then simplify.
struct WitnessStep {
  int axis = 0;
  int step = 0;
  std::vector<MoveApplication> moves;
  int crossing_id = -1;
};

struct UntanglingResult {
  int axis = 0;
  int start_crossings = 0;   // crossings of the simplified input
  int min_crossings = 0;     // least crossing count found in the family
  int u_upper = 0;
  std::vector<WitnessStep> witness;
  std::vector<Code> ground_codes;  // sorted
  Code terminal_code;              // where the witness ends
  bool exhaustive = true;
  int layers = 0;                  // layers explored
  int classes = 0;                 // R-classes met
  std::string method;
};

struct Progress {
  int layer = 0;
  int frontier = 0;
  int classes = 0;
  int best_crossings = 0;
  int best_layer = 0;
};

// R-classes and their crossing-change successors, shared between calls of
// untangle_bfs made with the same budgets. With absolute caps and exhaustive
// closures a cached run returns what a fresh one would.
struct UntangleCache {
  struct Impl;
  std::shared_ptr<Impl> impl;
  UntangleCache();
  int classes() const;
};

struct UntangleOptions {
  int max_changes = 4;
  SimplifyBudget budget;
  std::function<void(const Progress&)> on_progress;
  int max_expanded_members = 64;  // per class, in breadth-first order; -1 for all
  const std::atomic<bool>* cancel = nullptr;
  UntangleCache* cache = nullptr;  // set to stop early, result marked non-exhaustive
};

// Every over/under assignment of d's shadow, simplified; u_upper is the least
// number of flips reaching the least simplified crossing count.
UntanglingResult untangle_fixed_shadow(const SquareDiagram& d, const SimplifyBudget& b = {},
                                       int max_crossings = 12);

// Layered search over R-classes: layer k holds the classes first reached by k
// crossing changes, each change applied to any explored member of a class in
// layer k-1.
UntanglingResult untangle_bfs(const SquareDiagram& d, const UntangleOptions& o = {});

// Replays a result's witness from d and returns the diagram it ends at. Fixed
// shadow witnesses flip all their crossings first and simplify once; layered
// ones simplify after every change.
SquareDiagram replay(const SquareDiagram& d, const UntanglingResult& r, const SimplifyBudget& b = {});

struct GroundStateVerdict {
  bool ground = false;
  UntanglingResult evidence;
};
GroundStateVerdict is_ground_state(const SquareDiagram& d, const UntangleOptions& o = {});

// Exhaustive 0-1 search of the move and change closure under hard caps:
// moves cost nothing, changes cost one.
struct OracleCaps {
  int max_crossings = 4;
  int max_markers = 2;
  int max_punctures = 2;
  int max_ports = -1;
  int max_states = 200000;
};
struct OracleResult {
  int min_crossings = 0;
  int distance = 0;
  int states = 0;
};
OracleResult brute_oracle(const SquareDiagram& d, const OracleCaps& caps);
// The same answers for many diagrams at once, sharing one state graph;
// `states` is the size of each diagram's family.
std::vector<OracleResult> brute_oracle_all(const std::vector<SquareDiagram>& ds, const OracleCaps& caps);

nlohmann::json to_json(const UntanglingResult& r);
nlohmann::json to_json(const SimplifyBudget& b);
// Overrides the fields of `base` present in j; unknown keys are an error.
SimplifyBudget budget_from_json(const nlohmann::json& j, SimplifyBudget base = {});
// Results for the diagrams of one document. Totals add u_upper, start and
// minimum crossings over the axes.
nlohmann::json to_json(const std::vector<UntanglingResult>& per_axis);
nlohmann::json to_json(const MoveApplication& m);
MoveApplication move_from_json(const nlohmann::json& j);

}  // namespace periodica
