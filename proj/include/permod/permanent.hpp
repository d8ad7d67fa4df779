#pragma once

// Permanent mod 2^k over R_k, and of integer polynomial matrices.
//
// perm = det mod 2. For larger k:
//  * singular mod 2: a left null vector v (A^T v = 0 over F) with v_r = 1
//    turns row r into a row divisible by 2; expanding along it and along
//    the rows i != r (each duplicated into position r) leaves minors that
//    only matter mod 2^(k-1).
//  * non-singular mod 2: reorder rows so every leading minor is a unit,
//    then peel one leading block at a time. Adding y_s = d_s / d_(s-1) to
//    entry (s,s) of the s x s block C_s makes it singular mod 2, and
//    perm(M_s) = perm(C_s) - y_s perm(M_(s-1)).
// All minors of one level are independent and evaluated as one batch.

#include <tbb/blocked_range.h>
#include <tbb/parallel_reduce.h>

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "permod/error.hpp"
#include "permod/gf2poly.hpp"
#include "permod/linalg_f.hpp"
#include "permod/matrix.hpp"
#include "permod/parallel.hpp"
#include "permod/ring.hpp"
#include "permod/zpoly.hpp"

namespace permod {

struct PermOptions {
  unsigned workers = 0;  // 0: TBB default
  std::uint64_t budget = 1'000'000;  // inner permanents for perm_interpolate
};

// Intermediate values of the outermost recursion step, for inspection.
struct PermTrace {
  bool singular = false;
  // singular step
  std::vector<RingElem> v;  // normalized, in F
  std::size_t pivot_row = 0;
  std::vector<RingElem> b;  // in R_(k-1)
  // non-singular step
  std::vector<std::size_t> order;      // row i of QA is row order[i] of A
  std::map<std::size_t, RingElem> y;   // block size s -> y_s (in R_k)
};

namespace detail {

inline RingElem perm_rec(const MatR& a, const RingCtx& ctx, PermTrace* trace);

struct Minor {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

inline MatR reduce_matrix(const MatR& a, const RingCtx& to) {
  MatR out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out(i, j) = RingElem::from_coeffs(to, a(i, j).coeffs());
    }
  }
  return out;
}

// Permanents of the given minors of `a`, all in context `ctx`.
inline std::vector<RingElem> minor_perms(const MatR& a, const RingCtx& ctx,
                                         const std::vector<Minor>& minors) {
  if (minors.empty()) return {};
  if (ctx.k() == 1) {
    const BinaryField& f = ctx.field();
    const FieldMatrix packed = FieldMatrix::pack(a, f);
    auto fracs = parallel_map(minors.size(), [&](std::size_t i) {
      return det_fraction(packed.select(minors[i].rows, minors[i].cols));
    });
    std::vector<BinaryField::Elem> dens;
    dens.reserve(fracs.size());
    for (auto& fr : fracs) dens.push_back(std::move(fr.den));
    batch_invert(f, dens);
    std::vector<RingElem> out;
    out.reserve(fracs.size());
    for (std::size_t i = 0; i < fracs.size(); ++i) {
      out.push_back(RingElem::from_packed(ctx, f.mul(fracs[i].num, dens[i])));
    }
    return out;
  }
  return parallel_map(minors.size(), [&](std::size_t i) {
    return perm_rec(select(a, minors[i].rows, minors[i].cols), ctx, nullptr);
  });
}

// Singular step. `v` satisfies A^T v = 0 over F.
inline RingElem perm_singular(const MatR& a, const RingCtx& ctx, std::vector<BinaryField::Elem> v,
                              PermTrace* trace) {
  const BinaryField& f = ctx.field();
  const std::size_t n = a.rows();
  std::size_t r = n;
  for (std::size_t i = 0; i < n && r == n; ++i) {
    if (BinaryField::is_one(v[i])) r = i;
  }
  if (r == n) {
    std::size_t first = 0;
    while (BinaryField::is_zero(v[first])) ++first;
    const BinaryField::Elem s = f.inv(v[first]);
    for (auto& e : v) f.mul(e, s, e);
    r = first;
  }

  const RingCtx& low = ctx.with_k(ctx.k() - 1);
  std::vector<RingElem> lv(n);
  for (std::size_t i = 0; i < n; ++i) lv[i] = RingElem::from_packed(ctx, v[i]);

  std::vector<RingElem> b(n);
  for (std::size_t j = 0; j < n; ++j) {
    RingElem s = ctx.zero();
    for (std::size_t i = 0; i < n; ++i) {
      if (!BinaryField::is_zero(v[i])) s += lv[i] * a(i, j);
    }
    b[j] = halve_even(s, low);
  }
  if (trace != nullptr) {
    trace->singular = true;
    trace->pivot_row = r;
    trace->v.clear();
    for (const auto& e : v) trace->v.push_back(RingElem::from_packed(ctx.field_ctx(), e));
    trace->b = b;
  }

  const MatR a_low = reduce_matrix(a, low);
  const std::vector<std::size_t> one_r{r};

  std::vector<Minor> minors;
  std::vector<std::size_t> first_cols;  // group 1: column j per minor
  for (std::size_t j = 0; j < n; ++j) {
    if (b[j].is_zero()) continue;
    const std::vector<std::size_t> one_j{j};
    minors.push_back({complement(n, one_r), complement(n, one_j)});
    first_cols.push_back(j);
  }
  struct Pair {
    std::size_t i, j, l;
    RingElem coef;  // a_ij a_il in R_(k-1)
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == r || BinaryField::is_zero(v[i])) continue;
    const std::vector<std::size_t> ri{std::min(r, i), std::max(r, i)};
    const std::vector<std::size_t> rows = complement(n, ri);
    for (std::size_t j = 0; j < n; ++j) {
      if (a_low(i, j).is_zero()) continue;
      for (std::size_t l = j + 1; l < n; ++l) {
        if (a_low(i, l).is_zero()) continue;
        RingElem coef = a_low(i, j) * a_low(i, l);
        if (coef.is_zero()) continue;
        const std::vector<std::size_t> jl{j, l};
        minors.push_back({rows, complement(n, jl)});
        pairs.push_back({i, j, l, std::move(coef)});
      }
    }
  }

  const std::vector<RingElem> perms = minor_perms(a_low, low, minors);

  RingElem first = low.zero();
  for (std::size_t m = 0; m < first_cols.size(); ++m) first += b[first_cols[m]] * perms[m];
  RingElem result = double_into(first, ctx);

  // Pairs are grouped by i in increasing order.
  std::size_t m = first_cols.size();
  std::size_t p = 0;
  while (p < pairs.size()) {
    const std::size_t i = pairs[p].i;
    RingElem acc = low.zero();
    for (; p < pairs.size() && pairs[p].i == i; ++p, ++m) acc += pairs[p].coef * perms[m];
    result -= lv[i] * double_into(acc, ctx);
  }
  return result;
}

inline RingElem perm_rec(const MatR& a, const RingCtx& ctx, PermTrace* trace) {
  const std::size_t n = a.rows();
  if (n == 0) return ctx.one();
  if (n == 1) return a(0, 0);
  const BinaryField& f = ctx.field();
  const FieldMatrix packed = FieldMatrix::pack(a, f);
  if (ctx.k() == 1) return RingElem::from_packed(ctx, det_packed(packed));

  if (auto v = null_vector_packed(packed.transposed())) {
    return perm_singular(a, ctx, std::move(*v), trace);
  }

  const LeadingOrder lo = leading_order_packed(packed);
  const std::vector<std::size_t> all = [n] {
    std::vector<std::size_t> c(n);
    for (std::size_t j = 0; j < n; ++j) c[j] = j;
    return c;
  }();
  const MatR qa = select(a, lo.order, all);
  std::vector<RingElem> y(n);
  for (std::size_t s = 1; s < n; ++s) y[s] = RingElem::from_packed(ctx, lo.pivots[s]);
  if (trace != nullptr) {
    trace->singular = false;
    trace->order = lo.order;
    trace->y.clear();
    for (std::size_t s = 1; s < n; ++s) trace->y.emplace(s + 1, y[s]);
  }

  // perm(C_s) for block sizes s+1 = 2..n, each singular mod 2.
  const std::vector<RingElem> pc = parallel_map(n - 1, [&](std::size_t idx) {
    const std::size_t s = idx + 1;
    const std::vector<std::size_t> lead(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(s + 1));
    MatR c = select(qa, lead, lead);
    c(s, s) += y[s];
    const FieldMatrix cp = FieldMatrix::pack(c, f);
    auto v = null_vector_packed(cp.transposed());
    if (!v) throw Error("internal: shifted block is not singular");
    return perm_singular(c, ctx, std::move(*v), nullptr);
  });

  RingElem acc = qa(0, 0);
  for (std::size_t s = 1; s < n; ++s) acc = pc[s - 1] - y[s] * acc;
  return acc;
}

inline void check_matrix(const MatR& a, const RingCtx& ctx) {
  if (!a.square()) throw Error("matrix not square");
  for (const auto& e : a.data()) {
    if (!e.has_ctx() || &e.ctx() != &ctx) throw Error("context mismatch");
  }
}

}  // namespace detail

inline RingElem perm_mod2k(const MatR& a, const RingCtx& ctx, const PermOptions& opt = {},
                           PermTrace* trace = nullptr) {
  detail::check_matrix(a, ctx);
  return with_workers(opt.workers, [&] { return detail::perm_rec(a, ctx, trace); });
}

inline RingElem perm_mod2(const MatR& a, const RingCtx& ctx) {
  if (ctx.k() != 1) throw Error("not a field");
  return perm_mod2k(a, ctx);
}

// perm(A) mod 2^k with p = select_trinomial(n * max_deg + 1), so that the
// result never wraps around p and reads back as a plain polynomial.
inline ZxPoly perm_zx_mod2k(const ZxMatrix& a, unsigned k, const PermOptions& opt = {}) {
  if (!a.square()) throw Error("matrix not square");
  if (a.rows() == 0) return ZxPoly::constant(1);
  const std::size_t n_coeffs = a.rows() * max_degree(a) + 1;
  const RingCtx& ctx = RingCtx::get(k, select_trinomial(n_coeffs));
  return to_zx(perm_mod2k(to_ring(a, ctx), ctx, opt));
}

// ---- interpolation over a small field ----

// Non-zero elements of F as packed words, in increasing bit-pattern order.
inline std::vector<BinaryField::Elem> field_units(const BinaryField& f) {
  if (f.degree() > 24) throw Error("field too large to enumerate");
  std::vector<BinaryField::Elem> out;
  const std::uint64_t q = std::uint64_t{1} << f.degree();
  for (std::uint64_t x = 1; x < q; ++x) {
    BinaryField::Elem e(f.words(), 0);
    e[0] = x;
    out.push_back(std::move(e));
  }
  return out;
}

// Sum over a in F* of lift(a)^m, in R_k.
inline RingElem power_sum(const RingCtx& ctx, std::uint64_t m) {
  RingElem acc = ctx.zero();
  for (const auto& a : field_units(ctx.field())) acc += pow(RingElem::from_packed(ctx, a), m);
  return acc;
}

// Sum over all 2^(k-1)-tuples of F* of (a_1 ... a_t)^m with the product
// taken in R_k, enumerated tuple by tuple.
inline RingElem tuple_power_sum(const RingCtx& ctx, std::uint64_t m,
                                std::uint64_t budget = 1'000'000) {
  const auto units = field_units(ctx.field());
  const std::size_t t = std::size_t{1} << (ctx.k() - 1);
  double count = 1;
  for (std::size_t i = 0; i < t; ++i) count *= static_cast<double>(units.size());
  if (count > static_cast<double>(budget)) throw Error("interpolation budget");
  std::vector<RingElem> lifted;
  for (const auto& a : units) lifted.push_back(RingElem::from_packed(ctx, a));
  std::vector<std::size_t> idx(t, 0);
  RingElem acc = ctx.zero();
  while (true) {
    RingElem prod = ctx.one();
    for (std::size_t i : idx) prod *= lifted[i];
    acc += pow(prod, m);
    std::size_t pos = 0;
    while (pos < t && ++idx[pos] == units.size()) idx[pos++] = 0;
    if (pos == t) break;
  }
  return acc;
}

inline RingElem eval_at(const ZxPoly& p, const RingElem& a) {
  const RingCtx& ctx = a.ctx();
  RingElem acc = ctx.zero();
  const auto c = p.mod2k(ctx.k());
  for (std::size_t i = c.size(); i-- > 0;) {
    acc = acc * a;
    acc += RingElem::constant(ctx, c[i]);
  }
  return acc;
}

// Coefficient t of perm(A) mod 2^k is
//   sum over tuples in (F*)^(2^(k-1)) of a^(q-1-t) perm(A(a)),  a = a_1...a_m,
// with F the smallest field of the trinomial family having q >= N + 2.
inline ZxPoly perm_interpolate(const ZxMatrix& a, unsigned k, const PermOptions& opt = {}) {
  if (!a.square()) throw Error("matrix not square");
  if (k < 1) throw Error("k out of range [1, 63]");
  if (a.rows() == 0) return ZxPoly::constant(1);
  const std::size_t n_coeffs = a.rows() * max_degree(a) + 1;
  std::size_t deg = 2;
  while (deg < 63 && (std::uint64_t{1} << deg) < n_coeffs + 2) deg *= 3;
  if (deg > 24) throw Error("interpolation budget");
  const RingCtx& ctx = RingCtx::get(k, select_trinomial(deg));
  const std::uint64_t q = std::uint64_t{1} << deg;
  const std::size_t t = std::size_t{1} << (k - 1);

  std::uint64_t count = 1;
  for (std::size_t i = 0; i < t; ++i) {
    if (count > opt.budget / (q - 1) + 1) throw Error("interpolation budget");
    count *= q - 1;
  }
  if (count > opt.budget) throw Error("interpolation budget");

  const auto units = field_units(ctx.field());
  std::vector<RingElem> lifted;
  for (const auto& u : units) lifted.push_back(RingElem::from_packed(ctx, u));

  using Acc = std::vector<RingElem>;
  auto body = [&](std::uint64_t lo, std::uint64_t hi, Acc acc) {
    for (std::uint64_t code = lo; code < hi; ++code) {
      RingElem x = ctx.one();
      std::uint64_t rest = code;
      for (std::size_t i = 0; i < t; ++i) {
        x *= lifted[rest % (q - 1)];
        rest /= q - 1;
      }
      MatR m(a.rows(), a.cols());
      for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = eval_at(a(i, j), x);
      }
      const RingElem p = detail::perm_rec(m, ctx, nullptr);
      if (p.is_zero()) continue;
      // x^(q-1-c) for c = 0..N-1, from the top down.
      RingElem xp = pow(x, q - n_coeffs);
      for (std::size_t c = n_coeffs; c-- > 0;) {
        acc[c] += xp * p;
        xp *= x;
      }
    }
    return acc;
  };

  const Acc zero(n_coeffs, ctx.zero());
  const Acc total = with_workers(opt.workers, [&] {
    return tbb::parallel_reduce(
        tbb::blocked_range<std::uint64_t>(0, count, 64), zero,
        [&](const tbb::blocked_range<std::uint64_t>& r, Acc acc) {
          return body(r.begin(), r.end(), std::move(acc));
        },
        [](Acc x, const Acc& y) {
          for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
          return x;
        });
  });

  std::vector<BigInt> coeffs;
  for (const auto& c : total) {
    for (std::size_t i = 1; i < c.coeffs().size(); ++i) {
      if (c.coeff(i) != 0) throw Error("internal: interpolated coefficient is not constant");
    }
    coeffs.emplace_back(c.coeff(0));
  }
  return ZxPoly(std::move(coeffs));
}

}  // namespace permod
