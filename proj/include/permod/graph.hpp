#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "permod/error.hpp"

namespace permod {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  std::uint64_t w = 0;
};

// Simple undirected graph on vertices 0..n-1 with non-negative weights.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(std::size_t n) : n_(n), adj_(n) {}

  std::size_t n() const { return n_; }
  std::size_t m() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }

  std::size_t add_vertex() {
    adj_.emplace_back();
    return n_++;
  }

  std::size_t add_edge(std::size_t u, std::size_t v, std::uint64_t w) {
    if (u >= n_ || v >= n_) throw Error("edge endpoint out of range");
    if (u == v) throw Error("self-loop in input graph");
    if (find_edge(u, v)) throw Error("duplicate edge");
    edges_.push_back({u, v, w});
    adj_[u].push_back(edges_.size() - 1);
    adj_[v].push_back(edges_.size() - 1);
    return edges_.size() - 1;
  }

  std::optional<std::size_t> find_edge(std::size_t u, std::size_t v) const {
    if (u >= n_ || v >= n_) return std::nullopt;
    for (std::size_t e : adj_[u]) {
      const Edge& ed = edges_[e];
      if ((ed.u == u && ed.v == v) || (ed.u == v && ed.v == u)) return e;
    }
    return std::nullopt;
  }

  // Incident edge indices.
  const std::vector<std::size_t>& incident(std::size_t u) const { return adj_.at(u); }

  std::size_t other(std::size_t e, std::size_t u) const {
    const Edge& ed = edges_[e];
    return ed.u == u ? ed.v : ed.u;
  }

  std::vector<std::size_t> neighbors(std::size_t u) const {
    std::vector<std::size_t> out;
    for (std::size_t e : adj_.at(u)) out.push_back(other(e, u));
    return out;
  }

  void set_weight(std::size_t e, std::uint64_t w) { edges_.at(e).w = w; }

  // Copy without edge e; indices of later edges shift down by one.
  WeightedGraph without_edge(std::size_t e) const {
    WeightedGraph g(n_);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (i != e) g.add_edge(edges_[i].u, edges_[i].v, edges_[i].w);
    }
    return g;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adj_;
};

// Marked edges are graph edge indices; marked edge i has terminals
// s_i = edge.u and t_i = edge.v.
struct MarkedInstance {
  WeightedGraph graph;
  std::vector<std::size_t> marked;

  std::size_t s(std::size_t i) const { return graph.edge(marked.at(i)).u; }
  std::size_t t(std::size_t i) const { return graph.edge(marked.at(i)).v; }
};

// 64-bit finaliser used to derive per-trial seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform draw from [0, bound) by rejection; unlike
// std::uniform_int_distribution the sequence is the same on every
// standard library.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  while (true) {
    const std::uint64_t r = rng();
    if (r < limit) return r % bound;
  }
}

// Weight 2nm*w(e) + w'(e) with w'(e) uniform in {0, ..., 2m-1}.
inline WeightedGraph randomize_weights(const WeightedGraph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  WeightedGraph out = g;
  const std::uint64_t scale = 2 * g.n() * g.m();
  for (std::size_t e = 0; e < g.m(); ++e) {
    out.set_weight(e, scale * g.edge(e).w + bounded_draw(rng, 2 * g.m()));
  }
  return out;
}

// Splits every edge whose endpoints are both in `marked` with a new vertex;
// the half next to the lower endpoint keeps the weight, the other gets 0.
inline WeightedGraph split_marked_adjacencies(const WeightedGraph& g,
                                              const std::vector<std::size_t>& marked) {
  std::vector<bool> is_marked(g.n(), false);
  for (std::size_t v : marked) is_marked.at(v) = true;
  WeightedGraph out(g.n());
  for (const Edge& e : g.edges()) {
    if (is_marked[e.u] && is_marked[e.v]) {
      const std::size_t z = out.add_vertex();
      out.add_edge(e.u, z, e.w);
      out.add_edge(z, e.v, 0);
    } else {
      out.add_edge(e.u, e.v, e.w);
    }
  }
  return out;
}

}  // namespace permod
