#include "periodica/search.hpp"

#include "periodica/strands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace periodica {

namespace {

int pairs(const SquareDiagram& d) { return d.puncture_count(Side::left) + d.puncture_count(Side::bottom); }

int thread_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 16u));
}

// Runs f(i) for i in [0, n) on up to `threads` threads. Callers write results
// into slots indexed by i, so the outcome does not depend on scheduling.
template <class F>
void parallel_for(int n, int threads, F&& f) {
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

using Clock = std::chrono::steady_clock;

bool out_of_time(Clock::time_point start, double limit) {
  return limit > 0 && std::chrono::duration<double>(Clock::now() - start).count() > limit;
}

// Strictly smaller in (crossings, markers, puncture pairs).
bool reduces(const MoveApplication& m) {
  if (m.d_crossings != 0) return m.d_crossings < 0;
  if (m.d_markers != 0) return m.d_markers < 0;
  return m.d_punctures < 0;
}

SquareDiagram greedy(SquareDiagram d) {
  MoveFilter f;
  f.backward = false;
  for (bool progress = true; progress;) {
    progress = false;
    for (const auto& m : enumerate_moves(d, f))
      if (reduces(m)) {
        d = apply_enumerated(d, m);
        progress = true;
        break;
      }
  }
  return d;
}

std::vector<int> crossing_nodes(const SquareDiagram& d) {
  std::vector<int> out;
  for (std::size_t n = 0; n < d.nodes().size(); ++n)
    if (d.node(n).kind == NodeKind::crossing) out.push_back(static_cast<int>(n));
  return out;
}

}  // namespace

MoveFilter SimplifyBudget::caps_for(const SquareDiagram& d) const {
  MoveFilter f;
  f.max_crossings = max_crossings >= 0 ? max_crossings : d.crossings() + max_extra_crossings;
  f.max_markers = max_markers >= 0 ? max_markers : d.markers() + max_extra_markers;
  f.max_punctures = max_punctures >= 0 ? max_punctures : pairs(d) + max_extra_punctures;
  f.max_ports = max_ports;
  return f;
}

namespace {

using StopFn = std::function<bool(const Code&)>;

// Breadth-first exploration; with `stop`, returns as soon as a state it
// accepts is met and reports that state's code in `hit`.
Closure explore_until(const SquareDiagram& d, const SimplifyBudget& b, const StopFn* stop, Code* hit) {
  const auto start = Clock::now();
  const MoveFilter caps = b.caps_for(d);
  const int threads = thread_count(b.threads);
  Closure c;
  std::unordered_map<Code, int> seen;
  c.members.push_back({d, canonical_code(d), -1, {}});
  seen.emplace(c.members[0].code, 0);
  if (stop && (*stop)(c.members[0].code)) {
    *hit = c.members[0].code;
    c.exhaustive = false;
    return c;
  }

  struct Succ {
    MoveApplication move;
    Code code;
    SquareDiagram diagram;
  };
  constexpr int kChunk = 64;
  std::size_t lo = 0;
  while (lo < c.members.size()) {
    const std::size_t hi = c.members.size();
    for (std::size_t base = lo; base < hi; base += kChunk) {
      const int n = static_cast<int>(std::min<std::size_t>(kChunk, hi - base));
      std::vector<std::vector<Succ>> succ(n);
      parallel_for(n, threads, [&](int i) {
        const auto& from = c.members[base + i].diagram;
        for (auto& m : enumerate_moves(from, caps)) {
          auto next = apply_enumerated(from, m);
          auto code = canonical_code(next);
          succ[i].push_back({std::move(m), std::move(code), std::move(next)});
        }
      });
      for (int i = 0; i < n; ++i)
        for (auto& s : succ[i]) {
          if (seen.count(s.code)) continue;
          if (static_cast<int>(c.members.size()) >= b.max_states) {
            c.exhaustive = false;
            return c;
          }
          seen.emplace(s.code, static_cast<int>(c.members.size()));
          c.members.push_back({std::move(s.diagram), std::move(s.code), static_cast<int>(base) + i,
                               std::move(s.move)});
          if (stop && (*stop)(c.members.back().code)) {
            *hit = c.members.back().code;
            c.exhaustive = false;
            return c;
          }
        }
      if (out_of_time(start, b.time_limit)) {
        c.exhaustive = false;
        return c;
      }
    }
    lo = hi;
  }
  return c;
}

// With `closure`, also hands back the exploration of the result when the last
// round explored exactly from it.
SimplifyResult simplify_until(const SquareDiagram& d, const SimplifyBudget& b, const StopFn* stop, Code* hit,
                              Closure* closure = nullptr) {
  SimplifyResult r;
  SquareDiagram cur = greedy(d);
  for (int round = 0; round < 64; ++round) {
    Closure cl = explore_until(cur, b, stop, hit);
    r.states += static_cast<int>(cl.members.size());
    if (hit && !hit->empty()) break;
    r.exhaustive = r.exhaustive && cl.exhaustive;
    int best = 0;
    for (std::size_t i = 1; i < cl.members.size(); ++i)
      if (cl.members[i].code < cl.members[best].code) best = static_cast<int>(i);
    if (best == 0) {
      if (closure) *closure = std::move(cl);
      break;
    }
    cur = greedy(cl.members[best].diagram);
  }
  r.diagram = std::move(cur);
  return r;
}

}  // namespace

Closure explore(const SquareDiagram& d, const SimplifyBudget& b) { return explore_until(d, b, nullptr, nullptr); }

std::vector<MoveApplication> path_to(const Closure& c, int i) {
  std::vector<MoveApplication> out;
  for (; i > 0; i = c.members[i].parent) out.push_back(c.members[i].move);
  std::reverse(out.begin(), out.end());
  return out;
}

SimplifyResult simplify_ex(const SquareDiagram& d, const SimplifyBudget& b) {
  return simplify_until(d, b, nullptr, nullptr);
}

int crossing_lower_bound(const SquareDiagram& d) {
  struct Edge {
    int a, b, dx, dy;
  };
  struct Cycle {
    std::uint64_t mask;
    int dx, dy;
  };
  std::vector<Edge> edges;
  std::vector<Cycle> closed;
  std::vector<int> vertex_index(d.nodes().size(), -1);
  int nv = 0;
  for (std::size_t n = 0; n < d.nodes().size(); ++n)
    if (d.node(n).kind == NodeKind::vertex) vertex_index[n] = nv++;
  if (nv > 64) return 0;
  for (const auto& s : strands(d)) {
    if (s.closed)
      closed.push_back({0, s.displacement[0], s.displacement[1]});
    else
      edges.push_back({vertex_index[s.start_node], vertex_index[s.end_node], s.displacement[0], s.displacement[1]});
  }

  // simple cycles, each found once from its least vertex and first edge
  constexpr std::size_t kMaxCycles = 4000;
  std::vector<Cycle> cycles;
  std::vector<std::vector<std::pair<int, int>>> adj(nv);  // (edge, direction)
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    adj[edges[i].a].push_back({i, 1});
    if (edges[i].a != edges[i].b) adj[edges[i].b].push_back({i, -1});
  }
  std::vector<char> used(edges.size(), 0);
  std::map<std::pair<std::uint64_t, std::pair<int, int>>, char> seen;
  auto record = [&](std::uint64_t mask, int dx, int dy) {
    if (dx < 0 || (dx == 0 && dy < 0)) dx = -dx, dy = -dy;
    if ((dx != 0 || dy != 0) && seen.emplace(std::make_pair(mask, std::make_pair(dx, dy)), 1).second)
      cycles.push_back({mask, dx, dy});
  };
  std::function<void(int, int, std::uint64_t, int, int)> dfs = [&](int root, int v, std::uint64_t mask, int dx,
                                                                   int dy) {
    if (cycles.size() >= kMaxCycles) return;
    for (auto [ei, dir] : adj[v]) {
      if (used[ei]) continue;
      const auto& e = edges[ei];
      const int w = dir > 0 ? e.b : e.a;
      const int nx = dx + dir * e.dx, ny = dy + dir * e.dy;
      if (w == root) {
        record(mask, nx, ny);
        continue;
      }
      if (w < root || (mask >> w & 1)) continue;
      used[ei] = 1;
      dfs(root, w, mask | std::uint64_t{1} << w, nx, ny);
      used[ei] = 0;
    }
  };
  for (int v = 0; v < nv; ++v) dfs(v, v, std::uint64_t{1} << v, 0, 0);

  auto det = [](const Cycle& p, const Cycle& q) { return std::abs(p.dx * q.dy - p.dy * q.dx); };
  int base = 0;
  for (std::size_t i = 0; i < closed.size(); ++i)
    for (std::size_t j = i + 1; j < closed.size(); ++j) base += det(closed[i], closed[j]);
  std::vector<int> with_closed(cycles.size(), 0);
  for (std::size_t i = 0; i < cycles.size(); ++i)
    for (const auto& c : closed) with_closed[i] += det(cycles[i], c);

  int best = base;
  const std::size_t n = cycles.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::max(best, base + with_closed[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (cycles[i].mask & cycles[j].mask) continue;
      const int two = base + with_closed[i] + with_closed[j] + det(cycles[i], cycles[j]);
      best = std::max(best, two);
      if (n > 400) continue;
      for (std::size_t k = j + 1; k < n; ++k) {
        if ((cycles[i].mask | cycles[j].mask) & cycles[k].mask) continue;
        best = std::max(best, two + with_closed[k] + det(cycles[i], cycles[k]) + det(cycles[j], cycles[k]));
      }
    }
  }
  return best;
}

CrossingBound crossing_bound(const Tridiagram& t, const SimplifyBudget& b) {
  CrossingBound out;
  for (int a = 0; a < 3; ++a) {
    auto s = simplify_ex(t.diagrams[a], b);
    out.exhaustive = out.exhaustive && s.exhaustive;
    out.simplified.diagrams[a] = std::move(s.diagram);
  }
  out.triplet = triplet(out.simplified);
  for (int x : out.triplet) out.c_value += x * x;
  return out;
}

UntanglingResult untangle_fixed_shadow(const SquareDiagram& d, const SimplifyBudget& b, int max_crossings) {
  const auto xs = crossing_nodes(d);
  const int n = static_cast<int>(xs.size());
  if (n > max_crossings)
    throw BudgetError("fixed-shadow search over " + std::to_string(n) + " crossings exceeds the limit of " +
                      std::to_string(max_crossings) + "; use the layered search");
  UntanglingResult r;
  r.method = "fixed";
  r.axis = d.axis();
  const int total = 1 << n;
  std::vector<SimplifyResult> out(total);
  SimplifyBudget inner = b;
  inner.threads = 1;
  parallel_for(total, thread_count(b.threads), [&](int mask) {
    SquareDiagram e = d;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) e = change_crossing(e, xs[i]);
    out[mask] = simplify_ex(e, inner);
  });
  r.start_crossings = out[0].diagram.crossings();
  r.min_crossings = r.start_crossings;
  for (const auto& s : out) {
    r.min_crossings = std::min(r.min_crossings, s.diagram.crossings());
    r.exhaustive = r.exhaustive && s.exhaustive;
  }
  int best = -1;
  for (int mask = 0; mask < total; ++mask) {
    if (out[mask].diagram.crossings() != r.min_crossings) continue;
    r.ground_codes.push_back(canonical_code(out[mask].diagram));
    if (best < 0 || __builtin_popcount(mask) < __builtin_popcount(best)) best = mask;
  }
  std::sort(r.ground_codes.begin(), r.ground_codes.end());
  r.ground_codes.erase(std::unique(r.ground_codes.begin(), r.ground_codes.end()), r.ground_codes.end());
  r.u_upper = __builtin_popcount(best);
  for (int i = 0; i < n; ++i)
    if (best >> i & 1)
      r.witness.push_back({d.axis(), static_cast<int>(r.witness.size()) + 1, {}, d.node(xs[i]).id});
  r.terminal_code = canonical_code(out[best].diagram);
  r.layers = 1;
  r.classes = total;
  return r;
}

struct UntangleCache::Impl {
  struct Succ {
    int member, node_id, cls;
  };
  struct Class {
    Closure closure;
    int min_crossings = 0;
    bool expanded = false;
    bool expansion_exhaustive = true;
    std::vector<Succ> succ;  // one per distinct changed member, in member then crossing order
  };
  std::string key;
  std::vector<Class> classes;
  std::unordered_map<Code, int> known;

  int add(const SquareDiagram& root, Closure explored, const SimplifyBudget& b) {
    Class c;
    c.closure = explored.members.empty() ? explore(root, b) : std::move(explored);
    c.min_crossings = root.crossings();
    const int id = static_cast<int>(classes.size());
    for (const auto& m : c.closure.members) {
      known.emplace(m.code, id);
      c.min_crossings = std::min(c.min_crossings, m.diagram.crossings());
    }
    classes.push_back(std::move(c));
    return id;
  }
};

UntangleCache::UntangleCache() : impl(std::make_shared<Impl>()) {}
int UntangleCache::classes() const { return static_cast<int>(impl->classes.size()); }

UntanglingResult untangle_bfs(const SquareDiagram& d, const UntangleOptions& o) {
  const auto& b = o.budget;
  const int threads = thread_count(b.threads);
  UntangleCache::Impl local;
  UntangleCache::Impl& store = o.cache ? *o.cache->impl : local;
  const std::string key = to_json(b).dump() + "/" + std::to_string(o.max_expanded_members);
  if (store.key.empty())
    store.key = key;
  else if (store.key != key)
    throw std::invalid_argument("untangle cache was filled under different budgets");
  const StopFn stop = [&](const Code& c) { return store.known.count(c) > 0; };
  SimplifyBudget inner = b;
  inner.threads = 1;
  auto cancelled = [&] { return o.cancel && o.cancel->load(); };

  // The class of a diagram: simplify it, stopping early at any known state.
  auto resolve = [&](const Code& code, const SimplifyResult& s, const Code& hit, Closure& explored) {
    if (auto it = store.known.find(code); it != store.known.end()) return it->second;
    int cls;
    if (!hit.empty()) {
      cls = store.known.at(hit);
    } else if (auto it = store.known.find(canonical_code(s.diagram)); it != store.known.end()) {
      cls = it->second;
    } else {
      cls = store.add(s.diagram, std::move(explored), b);
    }
    store.known.emplace(code, cls);
    return cls;
  };

  // Every crossing change of the class's first members, each mapped to its class.
  auto expand = [&](int ci) {
    if (store.classes[ci].expanded) return true;
    const auto& members = store.classes[ci].closure.members;
    int limit = static_cast<int>(members.size());
    bool complete = true;
    if (o.max_expanded_members >= 0 && limit > o.max_expanded_members) {
      limit = o.max_expanded_members;
      complete = false;
    }
    struct Pending {
      std::size_t slot;
      SquareDiagram diagram;
      Code code;
    };
    std::vector<UntangleCache::Impl::Succ> succ;
    std::vector<Pending> pending;
    std::unordered_map<Code, char> listed;
    for (int mi = 0; mi < limit; ++mi) {
      const auto& from = store.classes[ci].closure.members[mi].diagram;
      for (int x : crossing_nodes(from)) {
        auto e = change_crossing(from, x);
        auto code = canonical_code(e);
        if (!listed.emplace(code, 1).second) continue;
        auto it = store.known.find(code);
        succ.push_back({mi, from.node(x).id, it == store.known.end() ? -1 : it->second});
        if (succ.back().cls < 0) pending.push_back({succ.size() - 1, std::move(e), std::move(code)});
      }
    }
    // Batch sizes depend only on earlier results, never on the thread count:
    // after a batch that opens a class comes a single candidate, since its
    // neighbours tend to fall into the new class.
    constexpr std::size_t kMaxBatch = 16;
    std::size_t batch = 1;
    bool opened = false;
    for (std::size_t lo = 0; lo < pending.size(); lo += batch) {
      if (cancelled()) return false;
      if (lo > 0) batch = opened ? 1 : std::min(batch * 2, kMaxBatch);
      opened = false;
      const int n = static_cast<int>(std::min(batch, pending.size() - lo));
      std::vector<SimplifyResult> simp(n);
      std::vector<Code> hit(n);
      std::vector<Closure> explored(n);
      // `store` is only read while the batch runs
      parallel_for(n, threads, [&](int i) {
        if (!store.known.count(pending[lo + i].code))
          simp[i] = simplify_until(pending[lo + i].diagram, inner, &stop, &hit[i], &explored[i]);
      });
      for (int i = 0; i < n; ++i) {
        const auto before = store.classes.size();
        const auto& p = pending[lo + i];
        if (!store.known.count(p.code) && hit[i].empty()) complete = complete && simp[i].exhaustive;
        succ[p.slot].cls = resolve(p.code, simp[i], hit[i], explored[i]);
        opened = opened || store.classes.size() > before;
      }
    }
    auto& c = store.classes[ci];
    c.succ = std::move(succ);
    c.expanded = true;
    c.expansion_exhaustive = complete;
    return true;
  };

  bool exhaustive = true;
  int root;
  {
    const Code code = canonical_code(d);
    SimplifyResult s;
    Code hit;
    Closure explored;
    if (!store.known.count(code)) {
      s = simplify_until(d, b, &stop, &hit, &explored);
      if (hit.empty()) exhaustive = s.exhaustive;
    }
    root = resolve(code, s, hit, explored);
  }

  struct Visit {
    int cls, layer, parent, member, node_id;
  };
  std::vector<Visit> visits{{root, 0, -1, -1, -1}};
  std::unordered_map<int, int> visited{{root, 0}};
  exhaustive = exhaustive && store.classes[root].closure.exhaustive;

  // No diagram of the family has fewer crossings than the floor, so reaching
  // it ends the search with a certified minimum.
  const int floor = crossing_lower_bound(d);
  int best = store.classes[root].min_crossings, best_layer = 0;
  int layer = 0;
  bool stopped = false, frontier_left = false;
  for (; layer < o.max_changes && best > floor && !stopped; ++layer) {
    int added = 0;
    const std::size_t count = visits.size();
    for (std::size_t vi = 0; vi < count && best > floor; ++vi) {
      if (visits[vi].layer != layer) continue;
      const int ci = visits[vi].cls;
      if (cancelled() || !expand(ci)) {
        stopped = true;
        break;
      }
      exhaustive = exhaustive && store.classes[ci].expansion_exhaustive;
      for (const auto& s : store.classes[ci].succ) {
        if (visited.count(s.cls)) continue;
        visited.emplace(s.cls, static_cast<int>(visits.size()));
        visits.push_back({s.cls, layer + 1, static_cast<int>(vi), s.member, s.node_id});
        const auto& c = store.classes[s.cls];
        exhaustive = exhaustive && c.closure.exhaustive;
        ++added;
        if (c.min_crossings < best) {
          best = c.min_crossings;
          best_layer = layer + 1;
        }
      }
    }
    if (stopped) break;
    if (o.on_progress) o.on_progress({layer + 1, added, static_cast<int>(visits.size()), best, best_layer});
    if (added == 0) break;
    frontier_left = layer + 1 == o.max_changes;
  }
  if (stopped || (best > floor && (frontier_left || o.max_changes == 0))) exhaustive = false;
  if (best <= floor && best_layer == 0) exhaustive = true;

  UntanglingResult r;
  r.method = "bfs";
  r.axis = d.axis();
  r.start_crossings = store.classes[root].closure.members[0].diagram.crossings();
  r.min_crossings = best;
  r.u_upper = best_layer;
  r.layers = layer;
  r.classes = static_cast<int>(visits.size());
  r.exhaustive = exhaustive;
  auto root_code = [&](int vi) -> const Code& { return store.classes[visits[vi].cls].closure.members[0].code; };
  int target = -1;
  for (int vi = 0; vi < static_cast<int>(visits.size()); ++vi) {
    if (store.classes[visits[vi].cls].min_crossings != best) continue;
    r.ground_codes.push_back(root_code(vi));
    if (visits[vi].layer == best_layer && (target < 0 || root_code(vi) < root_code(target))) target = vi;
  }
  std::sort(r.ground_codes.begin(), r.ground_codes.end());
  r.terminal_code = root_code(target);
  for (int vi = target; visits[vi].parent >= 0; vi = visits[vi].parent) {
    const auto& v = visits[vi];
    r.witness.push_back(
        {d.axis(), v.layer, path_to(store.classes[visits[v.parent].cls].closure, v.member), v.node_id});
  }
  std::reverse(r.witness.begin(), r.witness.end());
  return r;
}

SquareDiagram replay(const SquareDiagram& d, const UntanglingResult& r, const SimplifyBudget& b) {
  if (r.method == "fixed") {
    SquareDiagram e = d;
    for (const auto& s : r.witness) e = change_crossing(e, e.node_index(s.crossing_id));
    return simplify(e, b);
  }
  SquareDiagram cur = simplify(d, b);
  for (const auto& s : r.witness) {
    for (const auto& m : s.moves) cur = apply_move(cur, m);
    cur = simplify(change_crossing(cur, cur.node_index(s.crossing_id)), b);
  }
  return cur;
}

GroundStateVerdict is_ground_state(const SquareDiagram& d, const UntangleOptions& o) {
  GroundStateVerdict v;
  v.evidence = untangle_bfs(d, o);
  v.ground = v.evidence.u_upper == 0;
  return v;
}

OracleResult brute_oracle(const SquareDiagram& d, const OracleCaps& caps) {
  MoveFilter f;
  f.max_crossings = caps.max_crossings;
  f.max_markers = caps.max_markers;
  f.max_punctures = caps.max_punctures;
  f.max_ports = caps.max_ports;
  std::unordered_map<Code, int> dist;
  std::deque<std::pair<SquareDiagram, int>> queue;
  dist.emplace(canonical_code(d), 0);
  queue.emplace_back(d, 0);
  OracleResult r;
  r.min_crossings = d.crossings();
  std::map<int, int> nearest;  // crossing count -> least distance
  while (!queue.empty()) {
    auto [s, k] = std::move(queue.front());
    queue.pop_front();
    const Code sc = canonical_code(s);
    if (dist.at(sc) < k) continue;  // a cheaper copy was settled already
    nearest.emplace(s.crossings(), k);
    auto visit = [&](SquareDiagram next, int cost) {
      auto code = canonical_code(next);
      auto it = dist.find(code);
      if (it != dist.end() && it->second <= k + cost) return;
      if (it == dist.end() && static_cast<int>(dist.size()) >= caps.max_states)
        throw BudgetError("oracle state cap exceeded");
      dist[code] = k + cost;
      if (cost == 0)
        queue.emplace_front(std::move(next), k);
      else
        queue.emplace_back(std::move(next), k + 1);
    };
    for (const auto& m : enumerate_moves(s, f)) visit(apply_enumerated(s, m), 0);
    for (int x : crossing_nodes(s)) visit(change_crossing(s, x), 1);
  }
  r.min_crossings = nearest.begin()->first;
  r.distance = nearest.begin()->second;
  r.states = static_cast<int>(dist.size());
  return r;
}

std::vector<OracleResult> brute_oracle_all(const std::vector<SquareDiagram>& ds, const OracleCaps& caps) {
  MoveFilter f;
  f.max_crossings = caps.max_crossings;
  f.max_markers = caps.max_markers;
  f.max_punctures = caps.max_punctures;
  f.max_ports = caps.max_ports;
  std::unordered_map<Code, int> id;
  std::vector<int> crossings;
  std::vector<SquareDiagram> pending;
  std::vector<std::vector<std::pair<int, int>>> back;  // (from, cost) for every edge into a state
  auto add = [&](SquareDiagram d) {
    auto [it, fresh] = id.emplace(canonical_code(d), static_cast<int>(crossings.size()));
    if (fresh) {
      if (static_cast<int>(crossings.size()) >= caps.max_states) throw BudgetError("oracle state cap exceeded");
      crossings.push_back(d.crossings());
      pending.push_back(std::move(d));
      back.emplace_back();
    }
    return it->second;
  };
  std::vector<int> seeds;
  for (const auto& d : ds) seeds.push_back(add(d));
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const SquareDiagram s = std::move(pending[i]);
    pending[i] = SquareDiagram();
    for (const auto& m : enumerate_moves(s, f)) back[add(apply_enumerated(s, m))].push_back({static_cast<int>(i), 0});
    for (int x : crossing_nodes(s)) back[add(change_crossing(s, x))].push_back({static_cast<int>(i), 1});
  }
  const int n = static_cast<int>(crossings.size());

  // families: moves are reversible and changes are involutions, so reachability is symmetric
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int j = 0; j < n; ++j)
    for (auto [i, cost] : back[j]) parent[find(i)] = find(j);
  std::unordered_map<int, int> family_min, family_size;
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    auto [it, fresh] = family_min.emplace(r, crossings[i]);
    if (!fresh) it->second = std::min(it->second, crossings[i]);
    ++family_size[r];
  }

  // 0-1 search backwards from every least-crossing state
  std::vector<int> dist(n, -1);
  std::deque<std::pair<int, int>> queue;
  for (int i = 0; i < n; ++i)
    if (crossings[i] == family_min.at(find(i))) queue.emplace_back(i, 0);
  std::vector<int> best(n, std::numeric_limits<int>::max());
  for (auto [i, k] : queue) best[i] = 0;
  while (!queue.empty()) {
    auto [j, k] = queue.front();
    queue.pop_front();
    if (dist[j] >= 0) continue;
    dist[j] = k;
    for (auto [i, cost] : back[j]) {
      if (dist[i] >= 0 || best[i] <= k + cost) continue;
      best[i] = k + cost;
      if (cost == 0)
        queue.emplace_front(i, k);
      else
        queue.emplace_back(i, k + 1);
    }
  }
  std::vector<OracleResult> out;
  for (int i : seeds) out.push_back({family_min.at(find(i)), dist[i], family_size.at(find(i))});
  return out;
}

nlohmann::json to_json(const MoveApplication& m) {
  return {{"kind", move_name(m.kind)},
          {"direction", m.direction == Direction::forward ? "forward" : "backward"},
          {"site", m.site},
          {"variant", m.variant},
          {"d_crossings", m.d_crossings},
          {"d_markers", m.d_markers},
          {"d_punctures", m.d_punctures},
          {"description", m.describe()}};
}

MoveApplication move_from_json(const nlohmann::json& j) {
  MoveApplication m;
  if (!move_kind_from_name(j.at("kind").get<std::string>(), m.kind))
    throw std::invalid_argument("unknown move kind");
  const auto dir = j.at("direction").get<std::string>();
  if (dir != "forward" && dir != "backward") throw std::invalid_argument("direction must be forward or backward");
  m.direction = dir == "forward" ? Direction::forward : Direction::backward;
  m.site = j.at("site").get<std::vector<int>>();
  m.variant = j.value("variant", 0);
  m.d_crossings = j.value("d_crossings", 0);
  m.d_markers = j.value("d_markers", 0);
  m.d_punctures = j.value("d_punctures", 0);
  return m;
}

nlohmann::json to_json(const SimplifyBudget& b) {
  return {{"max_states", b.max_states},
          {"max_extra_crossings", b.max_extra_crossings},
          {"max_extra_markers", b.max_extra_markers},
          {"max_extra_punctures", b.max_extra_punctures},
          {"time_limit", b.time_limit},
          {"max_crossings", b.max_crossings},
          {"max_markers", b.max_markers},
          {"max_punctures", b.max_punctures},
          {"max_ports", b.max_ports}};
}

SimplifyBudget budget_from_json(const nlohmann::json& j, SimplifyBudget b) {
  if (!j.is_object()) throw std::invalid_argument("budget must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "time_limit") {
      if (!value.is_number()) throw std::invalid_argument("time_limit must be a number");
      b.time_limit = value.get<double>();
      continue;
    }
    int* field = key == "max_states"            ? &b.max_states
                 : key == "max_extra_crossings" ? &b.max_extra_crossings
                 : key == "max_extra_markers"   ? &b.max_extra_markers
                 : key == "max_extra_punctures" ? &b.max_extra_punctures
                 : key == "max_crossings"       ? &b.max_crossings
                 : key == "max_markers"         ? &b.max_markers
                 : key == "max_punctures"       ? &b.max_punctures
                 : key == "max_ports"           ? &b.max_ports
                 : key == "threads"             ? &b.threads
                                                : nullptr;
    if (!field) throw std::invalid_argument("unknown budget field " + key);
    if (!value.is_number_integer()) throw std::invalid_argument(key + " must be an integer");
    *field = value.get<int>();
  }
  if (b.max_states < 1) throw std::invalid_argument("max_states must be positive");
  if (b.time_limit < 0) throw std::invalid_argument("time_limit must not be negative");
  if (b.threads < 0) throw std::invalid_argument("threads must not be negative");
  return b;
}

nlohmann::json to_json(const std::vector<UntanglingResult>& per_axis) {
  nlohmann::json axes = nlohmann::json::array();
  int u = 0, start = 0, least = 0;
  bool exhaustive = true;
  for (const auto& r : per_axis) {
    axes.push_back(to_json(r));
    u += r.u_upper, start += r.start_crossings, least += r.min_crossings;
    exhaustive = exhaustive && r.exhaustive;
  }
  return {{"u_upper", u}, {"start_crossings", start}, {"min_crossings", least},
          {"exhaustive", exhaustive}, {"axes", axes}};
}

nlohmann::json to_json(const UntanglingResult& r) {
  nlohmann::json w = nlohmann::json::array();
  for (const auto& s : r.witness) {
    nlohmann::json moves = nlohmann::json::array();
    for (const auto& m : s.moves) moves.push_back(to_json(m));
    w.push_back({{"axis", s.axis}, {"step", s.step}, {"crossing", s.crossing_id}, {"moves", moves}});
  }
  nlohmann::json ground = nlohmann::json::array();
  for (const auto& c : r.ground_codes) ground.push_back(code_hex(c));
  return {{"method", r.method},
          {"axis", r.axis},
          {"start_crossings", r.start_crossings},
          {"min_crossings", r.min_crossings},
          {"u_upper", r.u_upper},
          {"exhaustive", r.exhaustive},
          {"layers", r.layers},
          {"classes", r.classes},
          {"terminal_code", code_hex(r.terminal_code)},
          {"ground_codes", ground},
          {"witness", w}};
}

}  // namespace periodica
