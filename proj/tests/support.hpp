#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "permod/oracles.hpp"
#include "permod/permod.hpp"

namespace permod::test {

using Rows = std::vector<std::vector<std::string>>;

inline ZxMatrix zx(const Rows& rows) {
  ZxMatrix m(rows.size(), rows.size(), ZxPoly{});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = parse_zxpoly(rows[i][j]);
  }
  return m;
}

inline RingElem elem(const RingCtx& ctx, const std::string& s) { return to_ring(parse_zxpoly(s), ctx); }

inline MatR mat(const RingCtx& ctx, const Rows& rows) { return to_ring(zx(rows), ctx); }

inline const RingCtx& gf4() { return RingCtx::get(1, parse_gf2poly("x^2+x+1")); }
inline const RingCtx& ring64(unsigned k) { return RingCtx::get(k, parse_gf2poly("x^6+x^3+1")); }

inline const Rows kExample1 = {{"1", "x+1", "x+2"}, {"x", "x^2", "x^2+x"}, {"x^2", "3", "x^2+3"}};
inline const Rows kExample2 = {{"1", "x", "x^2"}, {"x", "x^2", "1"}, {"1", "x^2", "x"}};

inline RingElem random_elem(std::mt19937_64& rng, const RingCtx& ctx) {
  std::vector<std::uint64_t> c(ctx.degree());
  for (auto& x : c) x = rng() & ctx.mask();
  return RingElem::from_coeffs(ctx, c);
}

inline MatR random_mat(std::mt19937_64& rng, const RingCtx& ctx, std::size_t n) {
  MatR a(n, n, ctx.zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = random_elem(rng, ctx);
  }
  return a;
}

inline ZxMatrix random_zx(std::mt19937_64& rng, std::size_t n, std::size_t max_deg, int bound) {
  ZxMatrix a(n, n, ZxPoly{});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<BigInt> c(max_deg + 1);
      for (auto& x : c) x = static_cast<std::int64_t>(rng() % (2 * bound + 1)) - bound;
      a(i, j) = ZxPoly(std::move(c));
    }
  }
  return a;
}

inline SymMatZ random_sym(std::mt19937_64& rng, std::size_t n, std::int64_t lo, std::int64_t hi) {
  SymMatZ a(n, n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
      a(j, i) = a(i, j);
    }
  }
  return a;
}

inline BigInt mod_pow2(const BigInt& v, unsigned k) {
  const BigInt m = BigInt(1) << k;
  BigInt r = v % m;
  if (r < 0) r += m;
  return r;
}

inline WeightedGraph graph(std::size_t n, const std::vector<Edge>& edges) {
  WeightedGraph g(n);
  for (const Edge& e : edges) g.add_edge(e.u, e.v, e.w);
  return g;
}

inline WeightedGraph triangle() { return graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}); }

// Two vertex-disjoint unit triangles {0,1,2} and {3,4,5} joined by the edge 2-3.
inline WeightedGraph two_triangles() {
  return graph(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}, {2, 3, 1}});
}

inline WeightedGraph petersen() {
  WeightedGraph g(10);
  for (std::size_t i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5, 1);
    g.add_edge(i, i + 5, 1);
    g.add_edge(5 + i, 5 + (i + 2) % 5, 1);
  }
  return g;
}

inline bool connected(const WeightedGraph& g) {
  std::vector<bool> seen(g.n(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == g.n();
}

inline WeightedGraph random_connected(std::mt19937_64& rng, std::size_t n, double p,
                                      std::uint64_t max_w) {
  std::uniform_real_distribution<double> coin(0, 1);
  while (true) {
    WeightedGraph g(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (coin(rng) < p) g.add_edge(i, j, 1 + rng() % max_w);
      }
    }
    if (g.m() >= 2 && connected(g)) return g;
  }
}

}  // namespace permod::test
