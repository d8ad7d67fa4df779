#pragma once

// Desk-scale equivalence runs against the brute-force oracles.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "permod/oracles.hpp"
#include "permod/permod.hpp"

namespace permod::selftest {

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
};

inline ZxMatrix random_zx(std::mt19937_64& rng, std::size_t n, std::size_t max_deg, int bound) {
  ZxMatrix a(n, n, ZxPoly{});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<BigInt> c(1 + rng() % (max_deg + 1));
      for (auto& x : c) x = static_cast<std::int64_t>(rng() % (2 * bound + 1)) - bound;
      a(i, j) = ZxPoly(std::move(c));
    }
  }
  return a;
}

inline SymMatZ random_sym(std::mt19937_64& rng, std::size_t n, int bound) {
  SymMatZ a(n, n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = static_cast<std::int64_t>(rng() % (2 * bound + 1)) - bound;
      a(j, i) = a(i, j);
    }
  }
  return a;
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

inline MatF random_field_matrix(std::mt19937_64& rng, const RingCtx& ctx, std::size_t n) {
  MatF a(n, n, ctx.zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::uint64_t> c(ctx.degree());
      for (auto& b : c) b = rng() & 1U;
      a(i, j) = RingElem::from_coeffs(ctx, c);
    }
  }
  return a;
}

inline std::vector<SuiteResult> run_all(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SuiteResult> out;
  auto suite = [&](std::string name, std::size_t cases, const std::function<bool()>& one) {
    SuiteResult r{std::move(name), cases, 0};
    for (std::size_t i = 0; i < cases; ++i) r.failures += one() ? 0 : 1;
    out.push_back(r);
  };

  suite("permanent vs expansion", 40, [&] {
    const std::size_t n = 1 + rng() % 5;
    const unsigned k = 1 + rng() % 4;
    const ZxMatrix a = random_zx(rng, n, 3, 5);
    return perm_zx_mod2k(a, k) == brute_permanent(a).reduced_mod2k(k);
  });
  suite("interpolation vs direct", 5, [&] {
    const std::size_t n = 1 + rng() % 3;
    const unsigned k = 1 + rng() % 2;
    const ZxMatrix a = random_zx(rng, n, 2, 3);
    return perm_interpolate(a, k) == perm_zx_mod2k(a, k);
  });
  suite("hafnian vs expansion", 40, [&] {
    const std::size_t n = 2 * (1 + rng() % 4);
    const unsigned k = 1 + rng() % 4;
    const SymMatZ a = random_sym(rng, n, 9);
    const BigInt m = BigInt(1) << k;
    BigInt want = brute_hafnian(a) % m;
    if (want < 0) want += m;
    return BigInt(hf_mod2k(a, k)) == want;
  });
  suite("one cycle vs enumeration", 10, [&] {
    const WeightedGraph g = random_connected(rng, 4 + rng() % 3, 0.5, 3);
    const MarkedInstance inst{g, {rng() % g.m()}};
    return shortest_cycle_through_edges(inst, rng()) == brute_disjoint_cycles(inst, 1).min_len3;
  });
  suite("two cycles vs enumeration", 5, [&] {
    const WeightedGraph g = random_connected(rng, 5 + rng() % 2, 0.5, 3);
    const std::size_t e1 = rng() % g.m();
    std::size_t e2 = rng() % g.m();
    while (e2 == e1) e2 = rng() % g.m();
    const MarkedInstance inst{g, {e1, e2}};
    return shortest_two_disjoint_cycles(inst, rng()) == brute_disjoint_cycles(inst, 2).min_len3;
  });
  suite("disjoint paths vs enumeration", 3, [&] {
    const WeightedGraph g = random_connected(rng, 5, 0.6, 3);
    return solve_sdp2(g, 0, 1, 2, 3, rng()) == brute_disjoint_paths(g, 0, 1, 2, 3);
  });
  const RingCtx& gf64 = RingCtx::get(1, parse_gf2poly("x^6+x^3+1"));
  {
    SuiteResult r{"inverse vs extended Euclid", 63, 0};
    for (std::uint64_t bits = 1; bits < 64; ++bits) {
      std::vector<std::uint64_t> c(6);
      for (std::size_t i = 0; i < 6; ++i) c[i] = (bits >> i) & 1U;
      const RingElem a = RingElem::from_coeffs(gf64, c);
      r.failures += field_inverse(a) == ext_euclid_inverse(a) ? 0 : 1;
    }
    out.push_back(r);
  }
  suite("companion embedding", 10, [&] {
    std::vector<BigInt> f(1 + rng() % 3), g(1 + rng() % 3);
    for (auto& x : f) x = static_cast<std::int64_t>(rng() % 11) - 5;
    for (auto& x : g) x = static_cast<std::int64_t>(rng() % 11) - 5;
    return companion_embedding_check(ZxPoly(f), ZxPoly(g), 6);
  });
  const RingCtx& gf4 = RingCtx::get(1, parse_gf2poly("x^2+x+1"));
  suite("transfer-matrix determinant", 10, [&] {
    return mv_det_check(random_field_matrix(rng, gf4, 1 + rng() % 3));
  });
  suite("characteristic-polynomial rank", 10, [&] {
    const MatF a = random_field_matrix(rng, gf4, 1 + rng() % 3);
    return rank_via_charpoly(a) == rank_f(a);
  });
  return out;
}

}  // namespace permod::selftest
