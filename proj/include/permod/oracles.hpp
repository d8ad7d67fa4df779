#pragma once

// Slow, independent references for the test suites. Nothing on a
// production path calls into this header.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "permod/error.hpp"
#include "permod/gf2poly.hpp"
#include "permod/graph.hpp"
#include "permod/linalg_f.hpp"
#include "permod/matrix.hpp"
#include "permod/ring.hpp"
#include "permod/zpoly.hpp"

namespace permod {

using SymMatZ = Matrix<std::int64_t>;

namespace detail {

// Sum over all n! permutations of the product of the chosen entries.
template <class T, class Mul>
T permutation_sum(const Matrix<T>& a, const T& zero, const T& one, Mul mul) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> sigma(n);
  for (std::size_t i = 0; i < n; ++i) sigma[i] = i;
  T acc = zero;
  do {
    T term = one;
    for (std::size_t i = 0; i < n; ++i) term = mul(term, a(i, sigma[i]));
    acc += term;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return acc;
}

}  // namespace detail

inline ZxPoly brute_permanent(const ZxMatrix& a) {
  if (!a.square()) throw Error("matrix not square");
  if (a.rows() > 9) throw Error("oracle size cap exceeded");
  return detail::permutation_sum<ZxPoly>(a, ZxPoly{}, ZxPoly::constant(1),
                                          [](const ZxPoly& x, const ZxPoly& y) { return x * y; });
}

inline RingElem brute_permanent(const MatR& a, const RingCtx& ctx) {
  if (!a.square()) throw Error("matrix not square");
  if (a.rows() > 9) throw Error("oracle size cap exceeded");
  return detail::permutation_sum<RingElem>(a, ctx.zero(), ctx.one(),
                                            [](const RingElem& x, const RingElem& y) { return x * y; });
}

// Sum over the perfect pairings of [2n] of the product of paired entries.
inline BigInt brute_hafnian(const SymMatZ& a) {
  if (!a.square()) throw Error("matrix not square");
  if (a.rows() % 2 != 0) throw Error("odd dimension");
  if (a.rows() > 10) throw Error("oracle size cap exceeded");
  const std::size_t n = a.rows();
  std::vector<bool> used(n, false);
  auto rec = [&](auto&& self) -> BigInt {
    std::size_t i = 0;
    while (i < n && used[i]) ++i;
    if (i == n) return 1;
    used[i] = true;
    BigInt total = 0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (used[j] || a(i, j) == 0) continue;
      used[j] = true;
      total += BigInt(a(i, j)) * self(self);
      used[j] = false;
    }
    used[i] = false;
    return total;
  };
  return rec(rec);
}

// ---- cycles and paths by enumeration ----

struct CycleOracle {
  std::optional<std::uint64_t> min_len3;  // simple cycles of length >= 3 only
  std::optional<std::uint64_t> min_len2;  // also an edge walked both ways
};

namespace detail {

struct CycleRec {
  std::uint64_t vmask;
  std::uint64_t mmask;  // bit i: marked edge i is on the cycle
  std::uint64_t weight;
};

inline std::vector<CycleRec> enumerate_cycles(const MarkedInstance& inst, bool with_two_cycles) {
  const WeightedGraph& g = inst.graph;
  std::map<std::size_t, std::size_t> marked_bit;
  for (std::size_t i = 0; i < inst.marked.size(); ++i) marked_bit[inst.marked[i]] = i;
  auto mbit = [&](std::size_t e) -> std::uint64_t {
    auto it = marked_bit.find(e);
    return it == marked_bit.end() ? 0 : std::uint64_t{1} << it->second;
  };
  std::vector<CycleRec> out;
  for (std::size_t s = 0; s < g.n(); ++s) {
    // Simple paths from s through vertices > s; close back to s.
    std::vector<std::size_t> path{s};
    std::vector<std::size_t> path_edges;
    auto dfs = [&](auto&& self, std::size_t u, std::uint64_t vmask, std::uint64_t mmask,
                   std::uint64_t w) -> void {
      for (std::size_t e : g.incident(u)) {
        const std::size_t v = g.other(e, u);
        if (v == s && path.size() >= 3 && path[1] < u) {
          out.push_back({vmask, mmask | mbit(e), w + g.edge(e).w});
        }
        if (v <= s || ((vmask >> v) & 1U)) continue;
        path.push_back(v);
        self(self, v, vmask | (std::uint64_t{1} << v), mmask | mbit(e), w + g.edge(e).w);
        path.pop_back();
      }
    };
    dfs(dfs, s, std::uint64_t{1} << s, 0, 0);
  }
  if (with_two_cycles) {
    for (std::size_t e = 0; e < g.m(); ++e) {
      const Edge& ed = g.edge(e);
      out.push_back({(std::uint64_t{1} << ed.u) | (std::uint64_t{1} << ed.v), mbit(e), 2 * ed.w});
    }
  }
  return out;
}

inline std::optional<std::uint64_t> best_disjoint(const std::vector<CycleRec>& cycles,
                                                  std::size_t k, std::size_t l) {
  const std::uint64_t full = (std::uint64_t{1} << k) - 1;
  std::optional<std::uint64_t> best;
  auto take = [&](std::uint64_t w) {
    if (!best || w < *best) best = w;
  };
  if (l == 1) {
    for (const auto& c : cycles) {
      if (c.mmask == full) take(c.weight);
    }
    return best;
  }
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    const auto& a = cycles[i];
    if (a.mmask == 0) continue;
    for (std::size_t j = i + 1; j < cycles.size(); ++j) {
      const auto& b = cycles[j];
      if (b.mmask == 0 || (a.vmask & b.vmask) != 0 || (a.mmask | b.mmask) != full) continue;
      take(a.weight + b.weight);
    }
  }
  return best;
}

}  // namespace detail

// Shortest l vertex-disjoint cycles (l = 1 or 2) jointly through every
// marked edge, each cycle through at least one marked edge.
inline CycleOracle brute_disjoint_cycles(const MarkedInstance& inst, std::size_t l) {
  if (inst.graph.n() > 10) throw Error("oracle size cap exceeded");
  if (l != 1 && l != 2) throw Error("l must be 1 or 2");
  const std::size_t k = inst.marked.size();
  CycleOracle out;
  out.min_len3 = detail::best_disjoint(detail::enumerate_cycles(inst, false), k, l);
  out.min_len2 = detail::best_disjoint(detail::enumerate_cycles(inst, true), k, l);
  return out;
}

// Number of distinct optimal (length >= 3) solutions, for picking
// instances with a unique optimum.
inline std::size_t count_optimal_cycles(const MarkedInstance& inst, std::size_t l) {
  const auto cycles = detail::enumerate_cycles(inst, false);
  const auto best = detail::best_disjoint(cycles, inst.marked.size(), l);
  if (!best) return 0;
  const std::uint64_t full = (std::uint64_t{1} << inst.marked.size()) - 1;
  std::size_t count = 0;
  if (l == 1) {
    for (const auto& c : cycles) count += c.mmask == full && c.weight == *best;
    return count;
  }
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    for (std::size_t j = i + 1; j < cycles.size(); ++j) {
      const auto& a = cycles[i];
      const auto& b = cycles[j];
      if (a.mmask == 0 || b.mmask == 0 || (a.vmask & b.vmask) != 0) continue;
      if ((a.mmask | b.mmask) == full && a.weight + b.weight == *best) ++count;
    }
  }
  return count;
}

// Shortest pair of vertex-disjoint s1-t1 and s2-t2 paths.
inline std::optional<std::uint64_t> brute_disjoint_paths(const WeightedGraph& g, std::size_t s1,
                                                         std::size_t t1, std::size_t s2,
                                                         std::size_t t2) {
  if (g.n() > 12) throw Error("oracle size cap exceeded");
  auto paths = [&](std::size_t s, std::size_t t) {
    std::map<std::uint64_t, std::uint64_t> best;  // vertex mask -> min weight
    auto dfs = [&](auto&& self, std::size_t u, std::uint64_t mask, std::uint64_t w) -> void {
      if (u == t) {
        auto it = best.find(mask);
        if (it == best.end() || w < it->second) best[mask] = w;
        return;
      }
      for (std::size_t e : g.incident(u)) {
        const std::size_t v = g.other(e, u);
        if ((mask >> v) & 1U) continue;
        self(self, v, mask | (std::uint64_t{1} << v), w + g.edge(e).w);
      }
    };
    dfs(dfs, s, std::uint64_t{1} << s, 0);
    return best;
  };
  const auto p1 = paths(s1, t1);
  const auto p2 = paths(s2, t2);
  std::optional<std::uint64_t> best;
  for (const auto& [m1, w1] : p1) {
    for (const auto& [m2, w2] : p2) {
      if ((m1 & m2) == 0 && (!best || w1 + w2 < *best)) best = w1 + w2;
    }
  }
  return best;
}

// ---- field and linear algebra cross-checks ----

inline RingElem ext_euclid_inverse(const RingElem& a) {
  if (a.ctx().k() != 1) throw Error("not a field");
  if (a.is_zero()) throw Error("zero inverse");
  const GfPoly& p = a.ctx().modulus();
  GfPoly r0 = p;
  GfPoly r1 = a.ctx().field().to_poly(a.packed());
  GfPoly s0;
  GfPoly s1 = GfPoly::one();
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    GfPoly s2 = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (!r0.is_one()) throw Error("element not invertible");
  const auto packed = a.ctx().field().from_poly(s0 % p);
  return RingElem::from_packed(a.ctx(), packed);
}

namespace detail {

// Polynomial in t and y over F: c[i][j] is the coefficient of t^i y^j.
class BiPoly {
 public:
  BiPoly(const RingCtx& ctx) : ctx_(&ctx) {}

  static BiPoly term(const RingCtx& ctx, std::size_t ti, std::size_t yj, const RingElem& c) {
    BiPoly p(ctx);
    p.at(ti, yj) = c;
    return p;
  }

  RingElem& at(std::size_t i, std::size_t j) {
    if (c_.size() <= i) c_.resize(i + 1);
    for (auto& row : c_) {
      if (row.size() <= j) row.resize(j + 1, ctx_->zero());
    }
    if (c_[i].size() <= j) c_[i].resize(j + 1, ctx_->zero());
    return c_[i][j];
  }

  BiPoly& operator+=(const BiPoly& o) {
    for (std::size_t i = 0; i < o.c_.size(); ++i) {
      for (std::size_t j = 0; j < o.c_[i].size(); ++j) {
        if (!o.c_[i][j].is_zero()) at(i, j) += o.c_[i][j];
      }
    }
    return *this;
  }

  BiPoly operator-() const {
    BiPoly out = *this;
    for (auto& row : out.c_) {
      for (auto& e : row) e = -e;
    }
    return out;
  }

  friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly out(*a.ctx_);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < a.c_[i].size(); ++j) {
        if (a.c_[i][j].is_zero()) continue;
        for (std::size_t k = 0; k < b.c_.size(); ++k) {
          for (std::size_t l = 0; l < b.c_[k].size(); ++l) {
            if (b.c_[k][l].is_zero()) continue;
            out.at(i + k, j + l) += a.c_[i][j] * b.c_[k][l];
          }
        }
      }
    }
    return out;
  }

  // Smallest power of t with a non-zero coefficient, if any.
  std::optional<std::size_t> lowest_t() const {
    for (std::size_t i = 0; i < c_.size(); ++i) {
      for (const auto& e : c_[i]) {
        if (!e.is_zero()) return i;
      }
    }
    return std::nullopt;
  }

 private:
  const RingCtx* ctx_;
  std::vector<std::vector<RingElem>> c_;
};

// Cofactor expansion along the first row, memoised on the column set.
inline BiPoly cofactor_det(const Matrix<BiPoly>& m, const RingCtx& ctx) {
  const std::size_t n = m.rows();
  std::map<std::uint64_t, BiPoly> memo;
  auto rec = [&](auto&& self, std::size_t row, std::uint64_t cols) -> BiPoly {
    if (row == n) return BiPoly::term(ctx, 0, 0, ctx.one());
    auto it = memo.find(cols);
    if (it != memo.end()) return it->second;
    BiPoly acc(ctx);
    std::size_t pos = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!((cols >> j) & 1U)) continue;
      BiPoly term = m(row, j) * self(self, row + 1, cols & ~(std::uint64_t{1} << j));
      acc += pos % 2 == 0 ? term : -term;
      ++pos;
    }
    memo.emplace(cols, acc);
    return acc;
  };
  return rec(rec, 0, (std::uint64_t{1} << n) - 1);
}

}  // namespace detail

// Rank by the characteristic polynomial of Y B, where B = [[0, A], [A^T, 0]]
// is symmetric with rank 2 rank(A) and Y = diag(1, y, y^2, ...).
inline std::size_t rank_via_charpoly(const MatF& a) {
  if (a.rows() > 4 || a.cols() > 4) throw Error("oracle size cap exceeded");
  if (a.rows() == 0 || a.cols() == 0) return 0;
  const RingCtx& ctx = a(0, 0).ctx();
  if (ctx.k() != 1) throw Error("not a field");
  const std::size_t r = a.rows();
  const std::size_t c = a.cols();
  const std::size_t n = r + c;
  Matrix<RingElem> b(n, n, ctx.zero());
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      b(i, r + j) = a(i, j);
      b(r + j, i) = a(i, j);
    }
  }
  Matrix<detail::BiPoly> m(n, n, detail::BiPoly(ctx));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      detail::BiPoly e(ctx);
      if (!b(i, j).is_zero()) e = -detail::BiPoly::term(ctx, 0, i, b(i, j));
      if (i == j) e += detail::BiPoly::term(ctx, 1, 0, ctx.one());
      m(i, j) = e;
    }
  }
  const auto low = detail::cofactor_det(m, ctx).lowest_t();
  const std::size_t zero_mult = low ? *low : n;
  return (n - zero_mult) / 2;
}

// Lower-triangular Toeplitz matrix of f truncated to d x d.
inline Matrix<BigInt> companion_embedding(const ZxPoly& f, std::size_t d) {
  Matrix<BigInt> p(d, d, BigInt(0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) p(i, j) = f.coeff(i - j);
  }
  return p;
}

// P(f + g) = P(f) + P(g) and P(f g) = P(f) P(g), entrywise.
inline bool companion_embedding_check(const ZxPoly& f, const ZxPoly& g, std::size_t d) {
  if (f.degree() + g.degree() >= static_cast<std::int64_t>(d)) throw Error("degree overflow");
  const auto pf = companion_embedding(f, d);
  const auto pg = companion_embedding(g, d);
  const auto psum = companion_embedding(f + g, d);
  const auto pprod = companion_embedding(f * g, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (psum(i, j) != pf(i, j) + pg(i, j)) return false;
      BigInt acc = 0;
      for (std::size_t t = 0; t < d; ++t) acc += pf(i, t) * pg(t, j);
      if (pprod(i, j) != acc) return false;
    }
  }
  return true;
}

// Determinant as a^T M^(n-1) b over clow sequences. States [p, h, u]:
// parity, head of the current clow, current vertex. The start vector sits
// on head 0; clow sequences avoiding vertex 0 cancel among themselves.
inline RingElem mv_determinant(const MatF& a) {
  if (!a.square() || a.rows() == 0) throw Error("matrix not square");
  if (a.rows() > 3) throw Error("oracle size cap exceeded");
  const RingCtx& ctx = a(0, 0).ctx();
  const std::size_t n = a.rows();
  const std::size_t states = 2 * n * n;
  auto id = [n](std::size_t p, std::size_t h, std::size_t u) { return (p * n + h) * n + u; };
  Matrix<RingElem> m(states, states, ctx.zero());
  for (std::size_t p = 0; p < 2; ++p) {
    for (std::size_t h = 0; h < n; ++h) {
      for (std::size_t u = h; u < n; ++u) {
        for (std::size_t v = h + 1; v < n; ++v) m(id(p, h, u), id(p, h, v)) = a(u, v);
        for (std::size_t h2 = h + 1; h2 < n; ++h2) m(id(p, h, u), id(1 - p, h2, h2)) = a(u, h);
      }
    }
  }
  std::vector<RingElem> vec(states, ctx.zero());
  vec[id(n % 2, 0, 0)] = ctx.one();
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::vector<RingElem> next(states, ctx.zero());
    for (std::size_t s = 0; s < states; ++s) {
      if (vec[s].is_zero()) continue;
      for (std::size_t t = 0; t < states; ++t) {
        if (!m(s, t).is_zero()) next[t] += vec[s] * m(s, t);
      }
    }
    vec = std::move(next);
  }
  RingElem det = ctx.zero();
  for (std::size_t h = 0; h < n; ++h) {
    for (std::size_t u = h; u < n; ++u) {
      det += vec[id(1, h, u)] * a(u, h);
      det -= vec[id(0, h, u)] * a(u, h);
    }
  }
  return det;
}

inline bool mv_det_check(const MatF& a) { return mv_determinant(a) == det_f(a); }

}  // namespace permod
