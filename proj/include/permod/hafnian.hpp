#pragma once

// Hafnian mod 2^k of symmetric integer matrices (diagonal ignored).
//
// hf = pf = det mod 2. When that is 0, a kernel vector v with v_1 = 1
// (Av = 0 mod 2) splits hf(A) into the hafnian of the matrix whose first
// row/column is sum_i v_i r_i (all entries even) minus the hafnians of the
// matrices whose first row/column is a copy of row i (every matching term
// appears twice). Both only matter mod 2^(k-1). When hf is odd, bumping
// one entry a_1j with hf(A[1,j]) odd makes it even.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "permod/error.hpp"
#include "permod/graph.hpp"
#include "permod/matrix.hpp"
#include "permod/parallel.hpp"

namespace permod {

using SymMatZ = Matrix<std::int64_t>;

namespace detail {

using ResMat = Matrix<std::uint64_t>;

inline std::uint64_t mask_k(unsigned k) {
  return k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
}

// Square bit matrix over GF(2), one word vector per row.
class BitMatrix {
 public:
  explicit BitMatrix(std::size_t n) : n_(n), w_((n + 63) / 64), bits_(n * w_, 0) {}

  static BitMatrix from(const ResMat& a) {
    BitMatrix b(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        if (i != j && (a(i, j) & 1U)) b.set(i, j);
      }
    }
    return b;
  }

  std::size_t n() const { return n_; }
  bool get(std::size_t i, std::size_t j) const { return (bits_[i * w_ + j / 64] >> (j % 64)) & 1U; }
  void set(std::size_t i, std::size_t j) { bits_[i * w_ + j / 64] |= std::uint64_t{1} << (j % 64); }
  void xor_row(std::size_t dst, std::size_t src) {
    for (std::size_t t = 0; t < w_; ++t) bits_[dst * w_ + t] ^= bits_[src * w_ + t];
  }
  void swap_rows(std::size_t a, std::size_t b) {
    for (std::size_t t = 0; t < w_; ++t) std::swap(bits_[a * w_ + t], bits_[b * w_ + t]);
  }

 private:
  std::size_t n_;
  std::size_t w_;
  std::vector<std::uint64_t> bits_;
};

inline bool gf2_det(BitMatrix m) {
  const std::size_t n = m.n();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = c;
    while (r < n && !m.get(r, c)) ++r;
    if (r == n) return false;
    m.swap_rows(r, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m.get(i, c)) m.xor_row(i, c);
    }
  }
  return true;
}

// Non-zero v with M v = 0, or nothing when M is invertible.
inline std::optional<std::vector<bool>> gf2_kernel_vector(BitMatrix m) {
  const std::size_t n = m.n();
  std::vector<std::size_t> pivot_col;  // pivot column of reduced row i
  std::vector<bool> is_pivot(n, false);
  std::size_t row = 0;
  for (std::size_t c = 0; c < n && row < n; ++c) {
    std::size_t r = row;
    while (r < n && !m.get(r, c)) ++r;
    if (r == n) continue;
    m.swap_rows(r, row);
    for (std::size_t i = 0; i < n; ++i) {
      if (i != row && m.get(i, c)) m.xor_row(i, row);
    }
    pivot_col.push_back(c);
    is_pivot[c] = true;
    ++row;
  }
  std::size_t free = 0;
  while (free < n && is_pivot[free]) ++free;
  if (free == n) return std::nullopt;
  std::vector<bool> v(n, false);
  v[free] = true;
  for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = m.get(i, free);
  return v;
}

inline ResMat drop(const ResMat& a, std::vector<std::size_t> gone) {
  std::sort(gone.begin(), gone.end());
  const std::vector<std::size_t> keep = complement(a.rows(), gone);
  return select(a, keep, keep);
}

inline std::uint64_t hf_rec(const ResMat& a, unsigned k);

// hf(A) mod 2^k given A v = 0 mod 2 with v_0 = 1.
inline std::uint64_t hf_singular(const ResMat& a, unsigned k, const std::vector<bool>& v) {
  const std::size_t n = a.rows();
  const std::uint64_t mk = mask_k(k);
  const std::uint64_t ml = mask_k(k - 1);

  std::vector<std::uint64_t> b(n, 0);
  for (std::size_t j = 1; j < n; ++j) {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (v[i] && i != j) s += a(i, j);
    }
    s &= mk;
    if (s & 1U) throw Error("internal: kernel combination is odd");
    b[j] = (s >> 1) & ml;
  }

  struct Job {
    std::vector<std::size_t> gone;
    std::uint64_t coef;
    std::size_t group;  // 0 for the b_j sum, else i
  };
  std::vector<Job> jobs;
  for (std::size_t j = 1; j < n; ++j) {
    if (b[j] != 0) jobs.push_back({{0, j}, b[j], 0});
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!v[i]) continue;
    for (std::size_t p = 1; p < n; ++p) {
      if (p == i || (a(i, p) & ml) == 0) continue;
      for (std::size_t q = p + 1; q < n; ++q) {
        if (q == i) continue;
        const std::uint64_t c = (a(i, p) * a(i, q)) & ml;
        if (c != 0) jobs.push_back({{0, i, p, q}, c, i});
      }
    }
  }
  const auto vals = parallel_map(jobs.size(), [&](std::size_t x) {
    return hf_rec(drop(a, jobs[x].gone), k - 1);
  });
  std::vector<std::uint64_t> sums(n, 0);
  for (std::size_t x = 0; x < jobs.size(); ++x) sums[jobs[x].group] += jobs[x].coef * vals[x];
  std::uint64_t result = (sums[0] & ml) << 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (v[i]) result -= (sums[i] & ml) << 1;
  }
  return result & mk;
}

inline std::uint64_t hf_rec(const ResMat& a, unsigned k) {
  const std::size_t n = a.rows();
  const std::uint64_t mk = mask_k(k);
  if (n == 0) return 1 & mk;
  if (n == 2) return a(0, 1) & mk;
  const BitMatrix bits = BitMatrix::from(a);
  if (k == 1) return gf2_det(bits) ? 1 : 0;

  if (auto v = gf2_kernel_vector(bits)) {
    std::size_t r = 0;
    while (!(*v)[r]) ++r;
    // Symmetric permutation moving r to position 0; hf is invariant.
    std::vector<std::size_t> order{r};
    for (std::size_t i = 0; i < n; ++i) {
      if (i != r) order.push_back(i);
    }
    std::vector<bool> pv;
    for (std::size_t i : order) pv.push_back((*v)[i]);
    return hf_singular(select(a, order, order), k, pv);
  }

  // Odd: hf(A) = hf(C) - hf(A[0,j]) with C = A + e_0j + e_j0 even.
  std::size_t j = 1;
  while (j < n && !((a(0, j) & 1U) && gf2_det(BitMatrix::from(drop(a, {0, j}))))) ++j;
  if (j == n) throw Error("internal: no odd minor in odd hafnian");
  ResMat c = a;
  c(0, j) = (c(0, j) + 1) & mk;
  c(j, 0) = c(0, j);
  const std::uint64_t minor = hf_rec(drop(a, {0, j}), k);
  return (hf_rec(c, k) - minor) & mk;
}

inline ResMat residues(const SymMatZ& a, unsigned k) {
  if (!a.square()) throw Error("matrix not square");
  if (a.rows() % 2 != 0) throw Error("odd dimension");
  const std::uint64_t mk = mask_k(k);
  ResMat r(a.rows(), a.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) != a(j, i)) throw Error("matrix not symmetric");
      if (i != j) r(i, j) = static_cast<std::uint64_t>(a(i, j)) & mk;
    }
  }
  return r;
}

}  // namespace detail

inline unsigned hf_mod2(const SymMatZ& a) {
  return detail::gf2_det(detail::BitMatrix::from(detail::residues(a, 1))) ? 1 : 0;
}

inline std::uint64_t hf_mod2k(const SymMatZ& a, unsigned k, unsigned workers = 0) {
  if (k < 1 || k > 63) throw Error("k out of range [1, 63]");
  const detail::ResMat r = detail::residues(a, k);
  return with_workers(workers, [&] { return detail::hf_rec(r, k); });
}

inline SymMatZ adjacency_matrix(const WeightedGraph& g) {
  SymMatZ a(g.n(), g.n(), 0);
  for (const Edge& e : g.edges()) {
    a(e.u, e.v) = 1;
    a(e.v, e.u) = 1;
  }
  return a;
}

inline std::uint64_t count_matchings_mod2k(const WeightedGraph& g, unsigned k,
                                           unsigned workers = 0) {
  if (k < 1 || k > 63) throw Error("k out of range [1, 63]");
  if (g.n() % 2 != 0) return 0;
  return hf_mod2k(adjacency_matrix(g), k, workers);
}

}  // namespace permod
