#pragma once

// Linear algebra over F = R_1. The workhorse is FieldMatrix, a packed
// matrix whose entries are BinaryField words; the Matrix<RingElem> entry
// points at the bottom of the file pack, compute and unpack.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "permod/binary_field.hpp"
#include "permod/error.hpp"
#include "permod/matrix.hpp"
#include "permod/ring.hpp"

namespace permod {

using MatR = Matrix<RingElem>;
using MatF = Matrix<RingElem>;

class FieldMatrix {
 public:
  using Elem = BinaryField::Elem;
  using View = BinaryField::View;
  using MutView = BinaryField::MutView;

  FieldMatrix(const BinaryField& f, std::size_t rows, std::size_t cols)
      : f_(&f), rows_(rows), cols_(cols), w_(f.words()), data_(rows * cols * w_, 0) {}

  // Low bit of every coefficient of every entry.
  static FieldMatrix pack(const Matrix<RingElem>& a, const BinaryField& f) {
    FieldMatrix m(f, a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        auto dst = m.at(i, j);
        const auto c = a(i, j).coeffs();
        for (std::size_t t = 0; t < c.size(); ++t) dst[t / 64] |= (c[t] & 1U) << (t % 64);
      }
    }
    return m;
  }

  Matrix<RingElem> unpack(const RingCtx& ctx) const {
    Matrix<RingElem> out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = RingElem::from_packed(ctx, at(i, j));
    }
    return out;
  }

  const BinaryField& field() const { return *f_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  MutView at(std::size_t i, std::size_t j) { return {data_.data() + (i * cols_ + j) * w_, w_}; }
  View at(std::size_t i, std::size_t j) const {
    return {data_.data() + (i * cols_ + j) * w_, w_};
  }

  bool is_zero(std::size_t i, std::size_t j) const { return BinaryField::is_zero(at(i, j)); }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    const std::size_t len = cols_ * w_;
    std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(a * len),
                     data_.begin() + static_cast<std::ptrdiff_t>((a + 1) * len),
                     data_.begin() + static_cast<std::ptrdiff_t>(b * len));
  }

  FieldMatrix select(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
    FieldMatrix out(*f_, rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) {
        const auto src = at(rows[i], cols[j]);
        std::copy(src.begin(), src.end(), out.at(i, j).begin());
      }
    }
    return out;
  }

  FieldMatrix transposed() const {
    FieldMatrix out(*f_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        const auto src = at(i, j);
        std::copy(src.begin(), src.end(), out.at(j, i).begin());
      }
    }
    return out;
  }

  // row_dst = s * row_dst + t * row_src on columns [from, cols)
  void combine_rows(std::size_t dst, View s, View t, std::size_t src, std::size_t from) {
    for (std::size_t j = from; j < cols_; ++j) {
      auto d = at(dst, j);
      f_->mul(s, d, d);
      f_->mul_add(t, at(src, j), d);
    }
  }

  // row_dst += t * row_src on columns [from, cols)
  void add_scaled_row(std::size_t dst, View t, std::size_t src, std::size_t from) {
    for (std::size_t j = from; j < cols_; ++j) f_->mul_add(t, at(src, j), at(dst, j));
  }

 private:
  const BinaryField* f_;
  std::size_t rows_;
  std::size_t cols_;
  std::size_t w_;
  std::vector<std::uint64_t> data_;
};

// det = num / den. Elimination without inversions; the caller divides,
// usually after batching several determinants (see batch_invert).
struct DetFraction {
  BinaryField::Elem num;
  BinaryField::Elem den;
};

inline DetFraction det_fraction(FieldMatrix m) {
  const BinaryField& f = m.field();
  if (m.rows() != m.cols()) throw Error("matrix not square");
  const std::size_t n = m.rows();
  DetFraction out{f.one(), f.one()};
  BinaryField::Elem piv(f.words());
  BinaryField::Elem t(f.words());
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = c;
    while (r < n && m.is_zero(r, c)) ++r;
    if (r == n) return {f.zero(), f.one()};
    m.swap_rows(r, c);  // no sign in characteristic 2
    const auto pv = m.at(c, c);
    std::copy(pv.begin(), pv.end(), piv.begin());
    for (std::size_t j = c + 1; j < n; ++j) {
      if (m.is_zero(j, c)) continue;
      const auto tv = m.at(j, c);
      std::copy(tv.begin(), tv.end(), t.begin());
      m.combine_rows(j, piv, t, c, c + 1);
      f.mul(out.den, piv, out.den);
    }
    f.mul(out.num, piv, out.num);
  }
  return out;
}

// Replaces every element by its inverse with a single field inversion.
inline void batch_invert(const BinaryField& f, std::span<BinaryField::Elem> xs) {
  if (xs.empty()) return;
  std::vector<BinaryField::Elem> prefix(xs.size());
  prefix[0] = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) prefix[i] = f.mul(prefix[i - 1], xs[i]);
  BinaryField::Elem acc = f.inv(prefix.back());
  for (std::size_t i = xs.size(); i-- > 1;) {
    BinaryField::Elem inv_i = f.mul(acc, prefix[i - 1]);
    f.mul(acc, xs[i], acc);
    xs[i] = std::move(inv_i);
  }
  xs[0] = std::move(acc);
}

inline BinaryField::Elem det_packed(const FieldMatrix& m) {
  DetFraction d = det_fraction(m);
  if (BinaryField::is_zero(d.num)) return d.num;
  return m.field().mul(d.num, m.field().inv(d.den));
}

// Rows (in index order) that raise the rank of the rows before them,
// together with the pivot column each one ends up owning.
struct RankProfile {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> pivot_cols;
  std::size_t rank() const { return rows.size(); }
};

inline RankProfile greedy_rows(const FieldMatrix& a) {
  const BinaryField& f = a.field();
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  RankProfile prof;
  // Echelon basis kept in `basis`; row b has its pivot at pivot_cols[b].
  FieldMatrix basis(f, std::min(n, m), m);
  FieldMatrix cur(f, 1, m);
  BinaryField::Elem s(f.words());
  BinaryField::Elem t(f.words());
  for (std::size_t i = 0; i < n && prof.rank() < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto src = a.at(i, j);
      std::copy(src.begin(), src.end(), cur.at(0, j).begin());
    }
    // Reduce against the basis; the basis is in echelon form with strictly
    // increasing pivot columns, so a single pass suffices.
    for (std::size_t b = 0; b < prof.rank(); ++b) {
      const std::size_t pc = prof.pivot_cols[b];
      if (cur.is_zero(0, pc)) continue;
      const auto bp = basis.at(b, pc);
      std::copy(bp.begin(), bp.end(), s.begin());
      const auto cp = cur.at(0, pc);
      std::copy(cp.begin(), cp.end(), t.begin());
      for (std::size_t j = 0; j < m; ++j) {
        auto d = cur.at(0, j);
        f.mul(s, d, d);
        f.mul_add(t, basis.at(b, j), d);
      }
    }
    std::size_t pc = 0;
    while (pc < m && cur.is_zero(0, pc)) ++pc;
    if (pc == m) continue;
    // Insert keeping pivot columns increasing.
    std::size_t pos = prof.rank();
    while (pos > 0 && prof.pivot_cols[pos - 1] > pc) --pos;
    for (std::size_t b = prof.rank(); b > pos; --b) {
      for (std::size_t j = 0; j < m; ++j) {
        const auto src = basis.at(b - 1, j);
        std::copy(src.begin(), src.end(), basis.at(b, j).begin());
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      const auto src = cur.at(0, j);
      std::copy(src.begin(), src.end(), basis.at(pos, j).begin());
    }
    prof.pivot_cols.insert(prof.pivot_cols.begin() + static_cast<std::ptrdiff_t>(pos), pc);
    prof.rows.push_back(i);
  }
  // pivot_cols is sorted by column; callers only need the set.
  return prof;
}

inline std::size_t rank_packed(const FieldMatrix& a) { return greedy_rows(a).rank(); }

// Solves B x = c for invertible square B (c is a column, one elem per row).
inline std::vector<BinaryField::Elem> solve_packed(FieldMatrix b, std::vector<BinaryField::Elem> c) {
  const BinaryField& f = b.field();
  const std::size_t n = b.rows();
  BinaryField::Elem t(f.words());
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t r = col;
    while (r < n && b.is_zero(r, col)) ++r;
    if (r == n) throw Error("matrix singular");
    b.swap_rows(r, col);
    std::swap(c[r], c[col]);
    const BinaryField::Elem inv = f.inv(b.at(col, col));
    for (std::size_t j = col; j < n; ++j) f.mul(inv, b.at(col, j), b.at(col, j));
    f.mul(inv, c[col], c[col]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || b.is_zero(i, col)) continue;
      const auto tv = b.at(i, col);
      std::copy(tv.begin(), tv.end(), t.begin());
      b.add_scaled_row(i, t, col, col);
      f.mul_add(t, c[col], c[i]);
    }
  }
  return c;
}

// Non-zero v with A v = 0, or nothing when A is invertible. S is the
// greedy row basis, T the greedy column basis inside the rows of S; the
// coordinates outside T are set to 1 and the block A[S,T] is solved.
inline std::optional<std::vector<BinaryField::Elem>> null_vector_packed(const FieldMatrix& a) {
  const BinaryField& f = a.field();
  const std::size_t n = a.cols();
  const RankProfile rows = greedy_rows(a);
  if (rows.rank() == n) return std::nullopt;
  std::vector<std::size_t> all_cols(n);
  for (std::size_t j = 0; j < n; ++j) all_cols[j] = j;
  const FieldMatrix sub = a.select(rows.rows, all_cols);
  const RankProfile cols = greedy_rows(sub.transposed());
  const std::vector<std::size_t> bound = cols.rows;
  const std::vector<std::size_t> free = complement(n, bound);

  std::vector<BinaryField::Elem> rhs(bound.size(), f.zero());
  for (std::size_t i = 0; i < bound.size(); ++i) {
    for (std::size_t j : free) BinaryField::add_to(rhs[i], sub.at(i, j));
  }
  std::vector<std::size_t> sub_rows(bound.size());
  for (std::size_t i = 0; i < sub_rows.size(); ++i) sub_rows[i] = i;
  const auto x = solve_packed(sub.select(sub_rows, bound), rhs);
  std::vector<BinaryField::Elem> v(n, f.zero());
  for (std::size_t j : free) v[j] = f.one();
  for (std::size_t i = 0; i < bound.size(); ++i) v[bound[i]] = x[i];
  return v;
}

// Row order making every leading principal minor non-zero, plus the LU
// pivots u_ss = d_s / d_(s-1) of the reordered matrix. order[i] is the
// original row placed at position i: the first unused row whose reduced
// entry in column i is non-zero.
struct LeadingOrder {
  std::vector<std::size_t> order;
  std::vector<BinaryField::Elem> pivots;
};

inline LeadingOrder leading_order_packed(FieldMatrix m) {
  const BinaryField& f = m.field();
  const std::size_t n = m.rows();
  if (n != m.cols()) throw Error("matrix not square");
  LeadingOrder out;
  std::vector<bool> used(n, false);
  BinaryField::Elem t(f.words());
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = 0;
    while (r < n && (used[r] || m.is_zero(r, c))) ++r;
    if (r == n) throw Error("matrix singular");
    used[r] = true;
    out.order.push_back(r);
    const auto pv = m.at(r, c);
    out.pivots.emplace_back(pv.begin(), pv.end());
    const BinaryField::Elem inv = f.inv(pv);
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || m.is_zero(j, c)) continue;
      f.mul(m.at(j, c), inv, t);
      m.add_scaled_row(j, t, r, c);
    }
  }
  return out;
}

inline FieldMatrix inverse_packed(FieldMatrix a) {
  const BinaryField& f = a.field();
  const std::size_t n = a.rows();
  if (n != a.cols()) throw Error("matrix not square");
  FieldMatrix inv(f, n, n);
  for (std::size_t i = 0; i < n; ++i) inv.at(i, i)[0] = 1;
  BinaryField::Elem t(f.words());
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = c;
    while (r < n && a.is_zero(r, c)) ++r;
    if (r == n) throw Error("matrix singular");
    a.swap_rows(r, c);
    inv.swap_rows(r, c);
    const BinaryField::Elem pinv = f.inv(a.at(c, c));
    for (std::size_t j = 0; j < n; ++j) {
      f.mul(pinv, a.at(c, j), a.at(c, j));
      f.mul(pinv, inv.at(c, j), inv.at(c, j));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a.is_zero(i, c)) continue;
      const auto tv = a.at(i, c);
      std::copy(tv.begin(), tv.end(), t.begin());
      a.add_scaled_row(i, t, c, 0);
      inv.add_scaled_row(i, t, c, 0);
    }
  }
  return inv;
}

// ---- Matrix<RingElem> front ends (entries must live in a k = 1 context) ----

namespace detail {

inline const RingCtx& field_ctx_of(const MatF& a) {
  if (a.rows() == 0 || a.cols() == 0) throw Error("empty matrix has no context");
  const RingCtx& ctx = a(0, 0).ctx();
  if (ctx.k() != 1) throw Error("not a field");
  for (const auto& e : a.data()) {
    if (&e.ctx() != &ctx) throw Error("context mismatch");
  }
  return ctx;
}

}  // namespace detail

inline RingElem det_f(const MatF& a) {
  if (!a.square()) throw Error("matrix not square");
  const RingCtx& ctx = detail::field_ctx_of(a);
  return RingElem::from_packed(ctx, det_packed(FieldMatrix::pack(a, ctx.field())));
}

inline std::size_t rank_f(const MatF& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  const RingCtx& ctx = detail::field_ctx_of(a);
  return rank_packed(FieldMatrix::pack(a, ctx.field()));
}

inline std::optional<std::vector<RingElem>> null_vector(const MatF& a) {
  if (!a.square()) throw Error("matrix not square");
  const RingCtx& ctx = detail::field_ctx_of(a);
  auto v = null_vector_packed(FieldMatrix::pack(a, ctx.field()));
  if (!v) return std::nullopt;
  std::vector<RingElem> out;
  out.reserve(v->size());
  for (const auto& e : *v) out.push_back(RingElem::from_packed(ctx, e));
  return out;
}

// Q as the row order: row i of QA is row order[i] of A.
inline std::vector<std::size_t> regularizing_permutation(const MatF& a) {
  if (!a.square()) throw Error("matrix not square");
  const RingCtx& ctx = detail::field_ctx_of(a);
  return leading_order_packed(FieldMatrix::pack(a, ctx.field())).order;
}

inline MatF inverse_f(const MatF& a) {
  if (!a.square()) throw Error("matrix not square");
  const RingCtx& ctx = detail::field_ctx_of(a);
  return inverse_packed(FieldMatrix::pack(a, ctx.field())).unpack(ctx);
}

inline MatR mat_mul(const MatR& a, const MatR& b) {
  if (a.cols() != b.rows()) throw Error("dimension mismatch");
  const RingCtx& ctx = a(0, 0).ctx();
  MatR out(a.rows(), b.cols(), ctx.zero());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      RingElem acc = ctx.zero();
      for (std::size_t t = 0; t < a.cols(); ++t) acc += a(i, t) * b(t, j);
      out(i, j) = acc;
    }
  }
  return out;
}

inline MatR identity(const RingCtx& ctx, std::size_t n) {
  MatR out(n, n, ctx.zero());
  for (std::size_t i = 0; i < n; ++i) out(i, i) = ctx.one();
  return out;
}

}  // namespace permod
