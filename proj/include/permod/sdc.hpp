#pragma once

// Shortest cycles through marked edges via permanents of pattern graphs.
//
// A pattern forces one outgoing arc at some terminals. Every cycle cover
// of the pattern graph must use the forced arcs; self-loops (weight x^0)
// absorb the vertices off the cycles. Summing over the orientations of the
// other marked edges makes covers with extra non-trivial cycles cancel:
// mod 2 for one cycle (f1), mod 4 for two cycles (f2).
//
// The reverse arc of a forced marked edge is removed as well. Without this
// the pattern graph admits the 2-cycle s -> t -> s on a marked edge, which
// survives the cancellation and reports a "cycle" of twice the edge weight.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "permod/error.hpp"
#include "permod/gf2poly.hpp"
#include "permod/graph.hpp"
#include "permod/parallel.hpp"
#include "permod/permanent.hpp"
#include "permod/ring.hpp"

namespace permod {

inline constexpr std::size_t kMaxMarkedEdges = 8;

struct ForcedArc {
  std::size_t from = 0;
  std::size_t to = 0;
  std::uint64_t weight = 0;
  bool real = true;  // orientation of a marked edge (false: s1->s2, t1->t2)
};

struct Pattern {
  std::vector<ForcedArc> arcs;
};

namespace detail {

inline std::vector<bool> terminal_mask(const MarkedInstance& inst) {
  std::vector<bool> term(inst.graph.n(), false);
  for (std::size_t i = 0; i < inst.marked.size(); ++i) {
    term[inst.s(i)] = true;
    term[inst.t(i)] = true;
  }
  return term;
}

inline bool sources_distinct(const Pattern& p) {
  std::set<std::size_t> seen;
  for (const auto& a : p.arcs) {
    if (!seen.insert(a.from).second) return false;
  }
  return true;
}

inline ForcedArc orient(const MarkedInstance& inst, std::size_t i, bool reversed) {
  const std::uint64_t w = inst.graph.edge(inst.marked[i]).w;
  return reversed ? ForcedArc{inst.t(i), inst.s(i), w, true}
                  : ForcedArc{inst.s(i), inst.t(i), w, true};
}

inline void check_marked(const MarkedInstance& inst, std::size_t min_k) {
  const std::size_t k = inst.marked.size();
  if (k < min_k) throw Error(min_k == 1 ? "no marked edges" : "need at least two marked edges");
  if (k > kMaxMarkedEdges) throw Error("too many marked edges (max 8)");
  std::set<std::size_t> seen;
  for (std::size_t e : inst.marked) {
    if (e >= inst.graph.m()) throw Error("marked edge index out of range");
    if (!seen.insert(e).second) throw Error("marked edges must be distinct");
  }
}

}  // namespace detail

// P_b: e_1 as (s_1, t_1); e_i for i >= 2 reversed iff bit i-2 of b is set.
inline std::vector<Pattern> p_patterns(const MarkedInstance& inst) {
  const std::size_t k = inst.marked.size();
  std::vector<Pattern> out;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << (k - 1)); ++b) {
    Pattern p;
    p.arcs.push_back(detail::orient(inst, 0, false));
    for (std::size_t i = 1; i < k; ++i) p.arcs.push_back(detail::orient(inst, i, (b >> (i - 1)) & 1U));
    out.push_back(std::move(p));
  }
  return out;
}

// Q_c: s_1 -> s_2 carrying w(e_1), t_1 -> t_2 carrying w(e_2); e_i for
// i >= 3 reversed iff bit i-3 of c is set.
inline std::vector<Pattern> q_patterns(const MarkedInstance& inst) {
  const std::size_t k = inst.marked.size();
  if (k < 2) throw Error("need at least two marked edges");
  const std::uint64_t w1 = inst.graph.edge(inst.marked[0]).w;
  const std::uint64_t w2 = inst.graph.edge(inst.marked[1]).w;
  std::vector<Pattern> out;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << (k - 2)); ++c) {
    Pattern p;
    p.arcs.push_back({inst.s(0), inst.s(1), w1, false});
    p.arcs.push_back({inst.t(0), inst.t(1), w2, false});
    for (std::size_t i = 2; i < k; ++i) p.arcs.push_back(detail::orient(inst, i, (c >> (i - 2)) & 1U));
    out.push_back(std::move(p));
  }
  return out;
}

inline MatR pattern_matrix(const MarkedInstance& inst, const Pattern& p, const RingCtx& ctx) {
  const WeightedGraph& g = inst.graph;
  const std::size_t n = g.n();
  const std::vector<bool> term = detail::terminal_mask(inst);
  for (const auto& a : p.arcs) {
    if (a.from >= n || a.to >= n || !term[a.from] || !term[a.to]) {
      throw Error("pattern references a non-terminal");
    }
  }
  if (!detail::sources_distinct(p)) throw Error("terminal is the source of two pattern arcs");

  MatR m(n, n, ctx.zero());
  for (const Edge& e : g.edges()) {
    m(e.u, e.v) = RingElem::monomial(ctx, e.w);
    m(e.v, e.u) = m(e.u, e.v);
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!term[v]) m(v, v) = ctx.one();
  }
  for (const auto& a : p.arcs) {
    if (a.real) m(a.to, a.from) = ctx.zero();
  }
  for (const auto& a : p.arcs) {
    for (std::size_t j = 0; j < n; ++j) m(a.from, j) = ctx.zero();
    m(a.from, a.to) = RingElem::monomial(ctx, a.weight);
  }
  return m;
}

// One more than the sum over rows of the largest exponent any pattern
// matrix can hold in that row: a bound on deg perm + 1.
inline std::size_t pattern_degree_bound(const MarkedInstance& inst) {
  const WeightedGraph& g = inst.graph;
  std::uint64_t marked_max = 0;
  for (std::size_t e : inst.marked) marked_max = std::max(marked_max, g.edge(e).w);
  const std::vector<bool> term = detail::terminal_mask(inst);
  std::uint64_t total = 1;
  for (std::size_t v = 0; v < g.n(); ++v) {
    std::uint64_t row = 0;
    for (std::size_t e : g.incident(v)) row = std::max(row, g.edge(e).w);
    if (term[v]) row = std::max(row, marked_max);
    total += row;
  }
  return static_cast<std::size_t>(total);
}

inline std::optional<std::size_t> lowest_exponent(const RingElem& f) {
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    if (f.coeff(i) != 0) return i;
  }
  return std::nullopt;
}

namespace detail {

inline RingElem pattern_sum(const MarkedInstance& inst, const RingCtx& ctx,
                            const std::vector<Pattern>& plus, const std::vector<Pattern>& minus) {
  std::vector<const Pattern*> all;
  for (const auto& p : plus) all.push_back(&p);
  for (const auto& p : minus) all.push_back(&p);
  const auto perms = parallel_map(all.size(), [&](std::size_t i) -> RingElem {
    if (!sources_distinct(*all[i])) return ctx.zero();  // no cover can use both arcs
    return perm_rec(pattern_matrix(inst, *all[i], ctx), ctx, nullptr);
  });
  RingElem acc = ctx.zero();
  for (std::size_t i = 0; i < perms.size(); ++i) {
    if (i < plus.size()) {
      acc += perms[i];
    } else {
      acc -= perms[i];
    }
  }
  return acc;
}

inline RingElem f1_impl(const MarkedInstance& inst) {
  const RingCtx& ctx = RingCtx::get(1, select_trinomial(pattern_degree_bound(inst)));
  return pattern_sum(inst, ctx, p_patterns(inst), {});
}

inline RingElem f2_impl(const MarkedInstance& inst) {
  const RingCtx& ctx = RingCtx::get(2, select_trinomial(pattern_degree_bound(inst)));
  return pattern_sum(inst, ctx, p_patterns(inst), q_patterns(inst));
}

// inst with marked edges i and j moved to the front.
inline MarkedInstance with_pair_first(const MarkedInstance& inst, std::size_t i, std::size_t j) {
  MarkedInstance out{inst.graph, {inst.marked[i], inst.marked[j]}};
  for (std::size_t x = 0; x < inst.marked.size(); ++x) {
    if (x != i && x != j) out.marked.push_back(inst.marked[x]);
  }
  return out;
}

// Smallest surviving exponent for l = 1 (f1) or l = 2 (f2, minimised over
// the separated pair).
inline std::optional<std::size_t> min_exponent(const MarkedInstance& inst, std::size_t l) {
  if (l == 1) return lowest_exponent(f1_impl(inst));
  const std::size_t k = inst.marked.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  }
  const auto exps = parallel_map(pairs.size(), [&](std::size_t p) {
    return lowest_exponent(f2_impl(with_pair_first(inst, pairs[p].first, pairs[p].second)));
  });
  std::optional<std::size_t> best;
  for (const auto& e : exps) {
    if (e && (!best || *e < *best)) best = e;
  }
  return best;
}

inline std::optional<std::uint64_t> solve_marked(const MarkedInstance& inst, std::size_t l,
                                                 std::uint64_t seed, unsigned trials) {
  if (trials < 1) throw Error("trials must be at least 1");
  const std::uint64_t scale = 2 * inst.graph.n() * inst.graph.m();
  const auto results = parallel_map(trials, [&](std::size_t t) -> std::optional<std::uint64_t> {
    const MarkedInstance r{randomize_weights(inst.graph, mix_seed(seed, t)), inst.marked};
    const auto j = min_exponent(r, l);
    if (!j) return std::nullopt;
    return *j / scale;
  });
  std::optional<std::uint64_t> best;
  for (const auto& w : results) {
    if (w && (!best || *w < *best)) best = w;
  }
  return best;
}

}  // namespace detail

// f1 = sum_b perm(A_{P_b}) over F, read as a polynomial (no wraparound).
inline RingElem f1(const MarkedInstance& inst, unsigned workers = 0) {
  detail::check_marked(inst, 1);
  return with_workers(workers, [&] { return detail::f1_impl(inst); });
}

// f2 = sum_b perm(A_{P_b}) - sum_c perm(A_{Q_c}) over R_2.
inline RingElem f2(const MarkedInstance& inst, unsigned workers = 0) {
  detail::check_marked(inst, 2);
  return with_workers(workers, [&] { return detail::f2_impl(inst); });
}

inline std::optional<std::uint64_t> shortest_cycle_through_edges(const MarkedInstance& inst,
                                                                 std::uint64_t seed,
                                                                 unsigned trials = 5,
                                                                 unsigned workers = 0) {
  detail::check_marked(inst, 1);
  return with_workers(workers, [&] { return detail::solve_marked(inst, 1, seed, trials); });
}

inline std::optional<std::uint64_t> shortest_two_disjoint_cycles(const MarkedInstance& inst,
                                                                 std::uint64_t seed,
                                                                 unsigned trials = 5,
                                                                 unsigned workers = 0) {
  detail::check_marked(inst, 2);
  return with_workers(workers, [&] { return detail::solve_marked(inst, 2, seed, trials); });
}

// Marked instances (one per choice of distinct neighbours u_i of the
// marked vertices v_i), after splitting edges between marked vertices.
inline std::vector<MarkedInstance> marked_vertex_instances(const WeightedGraph& g,
                                                           const std::vector<std::size_t>& marked) {
  for (std::size_t v : marked) {
    if (v >= g.n()) throw Error("marked vertex out of range");
  }
  if (std::set<std::size_t>(marked.begin(), marked.end()).size() != marked.size()) {
    throw Error("marked vertices must be distinct");
  }
  const WeightedGraph h = split_marked_adjacencies(g, marked);
  std::vector<std::vector<std::size_t>> nbrs;
  for (std::size_t v : marked) nbrs.push_back(h.neighbors(v));
  // A cycle through a degree-2 vertex uses both its edges, so picks that
  // differ only at such vertices give equivalent instances; keep one.
  std::set<std::vector<std::size_t>> seen;
  std::vector<MarkedInstance> out;
  std::vector<std::size_t> pick;
  std::vector<bool> used(h.n(), false);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == marked.size()) {
      std::vector<std::size_t> key = pick;
      for (std::size_t x = 0; x < marked.size(); ++x) {
        if (nbrs[x].size() == 2) key[x] = h.n();
      }
      if (!seen.insert(key).second) return;
      MarkedInstance inst{h, {}};
      for (std::size_t x = 0; x < marked.size(); ++x) inst.marked.push_back(*h.find_edge(marked[x], pick[x]));
      out.push_back(std::move(inst));
      return;
    }
    for (std::size_t u : nbrs[i]) {
      if (used[u]) continue;
      used[u] = true;
      pick.push_back(u);
      self(self, i + 1);
      pick.pop_back();
      used[u] = false;
    }
  };
  rec(rec, 0);
  return out;
}

// Shortest l disjoint cycles (l = 1 or 2) through the marked vertices.
inline std::optional<std::uint64_t> sdce_from_marked_vertices(const WeightedGraph& g,
                                                              const std::vector<std::size_t>& marked,
                                                              std::size_t l, std::uint64_t seed,
                                                              unsigned trials = 5,
                                                              unsigned workers = 0) {
  if (l != 1 && l != 2) throw Error("l must be 1 or 2");
  if (marked.size() < l) throw Error("need at least l marked vertices");
  if (marked.size() > kMaxMarkedEdges) throw Error("too many marked vertices (max 8)");
  const auto insts = marked_vertex_instances(g, marked);
  return with_workers(workers, [&] {
    const auto res = parallel_map(insts.size(), [&](std::size_t i) {
      return detail::solve_marked(insts[i], l, seed, trials);
    });
    std::optional<std::uint64_t> best;
    for (const auto& w : res) {
      if (w && (!best || *w < *best)) best = w;
    }
    return best;
  });
}

// G plus u1 ~ {s1, t1} and u2 ~ {s2, t2} with weight-0 edges; disjoint
// s_i-t_i paths are exactly disjoint cycles through u1 and u2.
struct Sdp2Graph {
  WeightedGraph graph;
  std::size_t u1 = 0;
  std::size_t u2 = 0;
};

inline Sdp2Graph sdp2_graph(const WeightedGraph& g, std::size_t s1, std::size_t t1, std::size_t s2,
                            std::size_t t2) {
  const std::set<std::size_t> ends{s1, t1, s2, t2};
  if (ends.size() != 4) throw Error("terminals must be distinct");
  if (*ends.rbegin() >= g.n()) throw Error("terminal not in graph");
  Sdp2Graph out{g, 0, 0};
  out.u1 = out.graph.add_vertex();
  out.u2 = out.graph.add_vertex();
  out.graph.add_edge(out.u1, s1, 0);
  out.graph.add_edge(out.u1, t1, 0);
  out.graph.add_edge(out.u2, s2, 0);
  out.graph.add_edge(out.u2, t2, 0);
  return out;
}

inline std::optional<std::uint64_t> solve_sdp2(const WeightedGraph& g, std::size_t s1,
                                               std::size_t t1, std::size_t s2, std::size_t t2,
                                               std::uint64_t seed, unsigned trials = 5,
                                               unsigned workers = 0) {
  const Sdp2Graph h = sdp2_graph(g, s1, t1, s2, t2);
  return sdce_from_marked_vertices(h.graph, {h.u1, h.u2}, 2, seed, trials, workers);
}

// ---- reconstruction ----

struct Reconstruction {
  bool unique = false;
  std::vector<std::size_t> edges;  // indices into the instance graph
};

// True if `edges` forms exactly l vertex-disjoint simple cycles (length
// >= 3) containing every marked edge, each cycle holding at least one
// marked edge, with total base weight `target`.
inline bool verify_cycles(const MarkedInstance& inst, const std::vector<std::size_t>& edges,
                          std::size_t l, std::uint64_t target) {
  const WeightedGraph& g = inst.graph;
  std::vector<std::vector<std::size_t>> adj(g.n());
  std::uint64_t weight = 0;
  std::set<std::size_t> chosen(edges.begin(), edges.end());
  if (chosen.size() != edges.size()) return false;
  for (std::size_t e : edges) {
    adj[g.edge(e).u].push_back(e);
    adj[g.edge(e).v].push_back(e);
    weight += g.edge(e).w;
  }
  if (weight != target) return false;
  for (std::size_t e : inst.marked) {
    if (!chosen.count(e)) return false;
  }
  for (const auto& a : adj) {
    if (!a.empty() && a.size() != 2) return false;
  }
  std::set<std::size_t> marked(inst.marked.begin(), inst.marked.end());
  std::vector<bool> seen(g.n(), false);
  std::size_t cycles = 0;
  for (std::size_t v = 0; v < g.n(); ++v) {
    if (adj[v].empty() || seen[v]) continue;
    ++cycles;
    std::size_t len = 0;
    bool has_marked = false;
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    std::size_t cur = v;
    do {
      seen[cur] = true;
      ++len;
      const std::size_t e = adj[cur][0] != prev ? adj[cur][0] : adj[cur][1];
      has_marked = has_marked || marked.count(e) > 0;
      prev = e;
      cur = g.other(e, cur);
    } while (cur != v && len <= g.n());
    if (cur != v || len < 3 || !has_marked) return false;
  }
  return cycles == l;
}

// Fixes the modified weights from `seed`, then drops each unmarked edge
// whose removal leaves the minimal exponent unchanged. The survivors are
// the optimum when it is unique under those weights.
inline Reconstruction reconstruct_cycles(const MarkedInstance& inst, std::size_t l,
                                         std::uint64_t target_weight, std::uint64_t seed,
                                         unsigned workers = 0) {
  if (l != 1 && l != 2) throw Error("l must be 1 or 2");
  detail::check_marked(inst, l);
  return with_workers(workers, [&] {
    Reconstruction out;
    const std::uint64_t scale = 2 * inst.graph.n() * inst.graph.m();
    const WeightedGraph weighted = randomize_weights(inst.graph, seed);
    // Current graph with original edge indices.
    std::vector<std::size_t> orig(inst.graph.m());
    for (std::size_t e = 0; e < orig.size(); ++e) orig[e] = e;
    MarkedInstance cur{weighted, inst.marked};
    auto best = detail::min_exponent(cur, l);
    if (!best || *best / scale != target_weight) return out;
    const std::set<std::size_t> marked(inst.marked.begin(), inst.marked.end());
    for (std::size_t e = 0; e < inst.graph.m(); ++e) {
      if (marked.count(e)) continue;
      const std::size_t pos = static_cast<std::size_t>(
          std::find(orig.begin(), orig.end(), e) - orig.begin());
      MarkedInstance trial{cur.graph.without_edge(pos), {}};
      for (std::size_t me : cur.marked) trial.marked.push_back(me > pos ? me - 1 : me);
      const auto j = detail::min_exponent(trial, l);
      if (j && *j <= *best) {
        best = j;
        cur = std::move(trial);
        orig.erase(orig.begin() + static_cast<std::ptrdiff_t>(pos));
      }
    }
    out.edges = orig;
    out.unique = verify_cycles(inst, out.edges, l, target_weight);
    return out;
  });
}

}  // namespace permod
