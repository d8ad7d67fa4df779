#pragma once

// Arithmetic in R_k = Z[x]/(2^k, p(x)) for an irreducible p over GF(2).
// R_1 is the finite field F = GF(2^deg p).
//
// Contexts are interned: RingCtx::get returns the unique context for a
// (k, p) pair, lives for the whole process, and is compared by address.
// Elements hold a plain pointer to their context.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "permod/binary_field.hpp"
#include "permod/error.hpp"
#include "permod/gf2poly.hpp"

namespace permod {

namespace detail {

// out[0 .. 2n-1) = a * b over Z/2^64, both of length n. Karatsuba above a
// small threshold; wrapping arithmetic keeps every step exact mod 2^64.
inline void int_poly_mul(const std::uint64_t* a, const std::uint64_t* b, std::size_t n,
                         std::uint64_t* out) {
  if (n <= 32) {
    std::fill(out, out + 2 * n - 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t s = a[i];
      if (s == 0) continue;
      for (std::size_t j = 0; j < n; ++j) out[i + j] += s * b[j];
    }
    return;
  }
  const std::size_t lo = n / 2;
  const std::size_t hi = n - lo;  // hi >= lo
  std::vector<std::uint64_t> z0(2 * lo - 1);
  std::vector<std::uint64_t> z2(2 * hi - 1);
  std::vector<std::uint64_t> z1(2 * hi - 1);
  std::vector<std::uint64_t> sa(hi);
  std::vector<std::uint64_t> sb(hi);
  int_poly_mul(a, b, lo, z0.data());
  int_poly_mul(a + lo, b + lo, hi, z2.data());
  for (std::size_t i = 0; i < hi; ++i) {
    sa[i] = a[lo + i] + (i < lo ? a[i] : 0);
    sb[i] = b[lo + i] + (i < lo ? b[i] : 0);
  }
  int_poly_mul(sa.data(), sb.data(), hi, z1.data());
  for (std::size_t i = 0; i < z0.size(); ++i) z1[i] -= z0[i];
  for (std::size_t i = 0; i < z2.size(); ++i) z1[i] -= z2[i];
  std::fill(out, out + 2 * n - 1, 0);
  for (std::size_t i = 0; i < z0.size(); ++i) out[i] += z0[i];
  for (std::size_t i = 0; i < z1.size(); ++i) out[i + lo] += z1[i];
  for (std::size_t i = 0; i < z2.size(); ++i) out[i + 2 * lo] += z2[i];
}

}  // namespace detail

class RingElem;

class RingCtx {
 public:
  static constexpr unsigned kMaxK = 63;

  // Context for (k, p). Validates 1 <= k <= 63 and that p is irreducible;
  // the irreducibility check runs once per distinct p.
  static const RingCtx& get(unsigned k, const GfPoly& p);

  unsigned k() const { return k_; }
  const GfPoly& modulus() const { return info_->p; }
  std::size_t degree() const { return info_->field.degree(); }
  std::uint64_t mask() const { return mask_; }
  std::span<const std::size_t> taps() const { return info_->taps; }
  const BinaryField& field() const { return info_->field; }

  // Same modulus, different k.
  const RingCtx& with_k(unsigned k) const { return get_for(info_, k); }
  const RingCtx& field_ctx() const { return with_k(1); }

  RingElem zero() const;
  RingElem one() const;

  RingCtx(const RingCtx&) = delete;
  RingCtx& operator=(const RingCtx&) = delete;

 private:
  struct ModulusInfo {
    explicit ModulusInfo(const GfPoly& poly) : p(poly), field(poly) {
      for (std::size_t e : poly.support()) {
        if (e < field.degree()) taps.push_back(e);
      }
    }
    GfPoly p;
    BinaryField field;
    std::vector<std::size_t> taps;
    std::array<std::unique_ptr<RingCtx>, kMaxK + 1> by_k{};
  };

  RingCtx(unsigned k, const ModulusInfo* info)
      : k_(k), mask_(k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1), info_(info) {}

  static std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
  }

  static std::map<std::vector<std::uint64_t>, std::unique_ptr<ModulusInfo>>& registry() {
    static std::map<std::vector<std::uint64_t>, std::unique_ptr<ModulusInfo>> r;
    return r;
  }

  static const RingCtx& get_for(const ModulusInfo* info, unsigned k) {
    if (k < 1 || k > kMaxK) throw Error("k out of range [1, 63]");
    std::lock_guard lock(registry_mutex());
    auto& slot = const_cast<ModulusInfo*>(info)->by_k[k];
    if (!slot) slot.reset(new RingCtx(k, info));
    return *slot;
  }

  unsigned k_;
  std::uint64_t mask_;
  const ModulusInfo* info_;
};

class RingElem {
 public:
  // A default-constructed element has no context; it exists only so that
  // containers can be resized before assignment.
  RingElem() = default;

  explicit RingElem(const RingCtx& ctx) : ctx_(&ctx), c_(ctx.degree(), 0) {}

  // Integer polynomial with the given coefficients (constant term first),
  // reduced mod (2^k, p).
  static RingElem from_coeffs(const RingCtx& ctx, std::span<const std::uint64_t> coeffs) {
    RingElem r(ctx);
    if (coeffs.size() <= ctx.degree()) {
      for (std::size_t i = 0; i < coeffs.size(); ++i) r.c_[i] = coeffs[i] & ctx.mask();
      return r;
    }
    std::vector<std::uint64_t> wide(coeffs.begin(), coeffs.end());
    r.absorb_wide(wide);
    return r;
  }

  static RingElem constant(const RingCtx& ctx, std::uint64_t value) {
    RingElem r(ctx);
    r.c_[0] = value & ctx.mask();
    return r;
  }

  static RingElem monomial(const RingCtx& ctx, std::size_t e) {
    if (e < ctx.degree()) {
      RingElem r(ctx);
      r.c_[e] = 1;
      return r;
    }
    std::vector<std::uint64_t> wide(e + 1, 0);
    wide[e] = 1;
    RingElem r(ctx);
    r.absorb_wide(wide);
    return r;
  }

  bool has_ctx() const { return ctx_ != nullptr; }
  const RingCtx& ctx() const { return *ctx_; }
  std::span<const std::uint64_t> coeffs() const { return c_; }
  std::uint64_t coeff(std::size_t i) const { return c_[i]; }

  bool is_zero() const {
    for (std::uint64_t v : c_) {
      if (v != 0) return false;
    }
    return true;
  }

  bool is_one() const {
    if (c_.empty() || c_[0] != 1) return false;
    for (std::size_t i = 1; i < c_.size(); ++i) {
      if (c_[i] != 0) return false;
    }
    return true;
  }

  RingElem& operator+=(const RingElem& o) {
    check_same(o);
    const std::uint64_t m = ctx_->mask();
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = (c_[i] + o.c_[i]) & m;
    return *this;
  }

  RingElem& operator-=(const RingElem& o) {
    check_same(o);
    const std::uint64_t m = ctx_->mask();
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = (c_[i] - o.c_[i]) & m;
    return *this;
  }

  RingElem operator-() const {
    RingElem r = *this;
    const std::uint64_t m = ctx_->mask();
    for (auto& v : r.c_) v = (0 - v) & m;
    return r;
  }

  friend RingElem operator+(RingElem a, const RingElem& b) { return a += b; }
  friend RingElem operator-(RingElem a, const RingElem& b) { return a -= b; }

  friend RingElem operator*(const RingElem& a, const RingElem& b) {
    a.check_same(b);
    const RingCtx& ctx = *a.ctx_;
    if (ctx.k() == 1) {
      const BinaryField& f = ctx.field();
      return from_packed(ctx, f.mul(a.packed(), b.packed()));
    }
    const std::size_t d = ctx.degree();
    std::size_t nnz_a = 0;
    std::size_t nnz_b = 0;
    for (std::size_t i = 0; i < d; ++i) {
      nnz_a += a.c_[i] != 0;
      nnz_b += b.c_[i] != 0;
    }
    RingElem r(ctx);
    if (nnz_a == 0 || nnz_b == 0) return r;
    const RingElem& sparse = nnz_a <= nnz_b ? a : b;
    const RingElem& dense = nnz_a <= nnz_b ? b : a;
    thread_local std::vector<std::uint64_t> wide;
    wide.assign(2 * d, 0);
    if (std::min(nnz_a, nnz_b) <= 48) {
      for (std::size_t i = 0; i < d; ++i) {
        const std::uint64_t s = sparse.c_[i];
        if (s == 0) continue;
        for (std::size_t j = 0; j < d; ++j) wide[i + j] += s * dense.c_[j];
      }
    } else {
      detail::int_poly_mul(a.c_.data(), b.c_.data(), d, wide.data());
    }
    r.absorb_wide(wide);
    return r;
  }

  RingElem& operator*=(const RingElem& o) { return *this = *this * o; }

  friend bool operator==(const RingElem& a, const RingElem& b) {
    return a.ctx_ == b.ctx_ && a.c_ == b.c_;
  }

  // Low bits of every coefficient, packed for BinaryField.
  BinaryField::Elem packed() const {
    BinaryField::Elem out(ctx_->field().words(), 0);
    for (std::size_t i = 0; i < c_.size(); ++i) out[i / 64] |= (c_[i] & 1U) << (i % 64);
    return out;
  }

  // Element of `ctx` whose coefficients are the bits of `bits` (0 or 1).
  static RingElem from_packed(const RingCtx& ctx, BinaryField::View bits) {
    RingElem r(ctx);
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = (bits[i / 64] >> (i % 64)) & 1U;
    return r;
  }

 private:
  void check_same(const RingElem& o) const {
    if (ctx_ != o.ctx_ || ctx_ == nullptr) throw Error("context mismatch");
  }

  // Reduces an integer polynomial mod p (monic, so division is exact over
  // Z and commutes with mod 2^k), then masks into this element.
  void absorb_wide(std::vector<std::uint64_t>& wide) {
    const std::size_t d = ctx_->degree();
    const auto taps = ctx_->taps();
    for (std::size_t i = wide.size(); i-- > d;) {
      const std::uint64_t c = wide[i];
      if (c == 0) continue;
      wide[i] = 0;
      for (std::size_t t : taps) wide[i - d + t] -= c;
    }
    const std::uint64_t m = ctx_->mask();
    for (std::size_t i = 0; i < d; ++i) c_[i] = (i < wide.size() ? wide[i] : 0) & m;
  }

  const RingCtx* ctx_ = nullptr;
  std::vector<std::uint64_t> c_;
};

inline const RingCtx& RingCtx::get(unsigned k, const GfPoly& p) {
  if (k < 1 || k > kMaxK) throw Error("k out of range [1, 63]");
  const ModulusInfo* info = nullptr;
  {
    std::lock_guard lock(registry_mutex());
    auto& reg = registry();
    std::vector<std::uint64_t> key(p.words().begin(), p.words().end());
    auto it = reg.find(key);
    if (it != reg.end()) info = it->second.get();
  }
  if (info == nullptr) {
    if (p.degree() < 1 || !is_irreducible(p)) throw Error("modulus not irreducible");
    std::lock_guard lock(registry_mutex());
    auto& reg = registry();
    std::vector<std::uint64_t> key(p.words().begin(), p.words().end());
    auto& slot = reg[key];
    if (!slot) slot = std::make_unique<ModulusInfo>(p);
    info = slot.get();
  }
  return get_for(info, k);
}

inline RingElem RingCtx::zero() const { return RingElem(*this); }
inline RingElem RingCtx::one() const { return RingElem::constant(*this, 1); }

inline RingElem ring_sum(const RingCtx& ctx, std::span<const RingElem> terms) {
  RingElem acc = ctx.zero();
  for (const auto& t : terms) acc += t;
  return acc;
}

inline RingElem pow(const RingElem& a, std::uint64_t e) {
  RingElem result = a.ctx().one();
  RingElem base = a;
  while (e != 0) {
    if (e & 1U) result *= base;
    e >>= 1;
    if (e != 0) base *= base;
  }
  return result;
}

// a^(q-2) in F; see BinaryField::inv.
inline RingElem field_inverse(const RingElem& a) {
  if (a.ctx().k() != 1) throw Error("not a field");
  if (a.is_zero()) throw Error("zero inverse");
  return RingElem::from_packed(a.ctx(), a.ctx().field().inv(a.packed()));
}

// Coefficients reduced mod 2^j, j <= k.
inline RingElem reduce_to(const RingElem& a, unsigned j) {
  if (j > a.ctx().k()) throw Error("cannot reduce to a larger modulus");
  const RingCtx& to = a.ctx().with_k(j);
  return RingElem::from_coeffs(to, a.coeffs());
}

inline RingElem project_mod2(const RingElem& a) { return reduce_to(a, 1); }

// Reinterprets a field element (0/1 coefficients) in R_k'.
inline RingElem lift(const RingElem& a, unsigned k_to) {
  if (a.ctx().k() != 1) throw Error("lift expects a field element");
  return RingElem::from_coeffs(a.ctx().with_k(k_to), a.coeffs());
}

// b with a = 2b, returned in R_{k-1}.
inline RingElem halve_even(const RingElem& a, const RingCtx& out) {
  if (&out.modulus() != &a.ctx().modulus() || out.k() + 1 != a.ctx().k()) {
    throw Error("context mismatch");
  }
  std::vector<std::uint64_t> half(a.coeffs().size());
  for (std::size_t i = 0; i < half.size(); ++i) {
    const std::uint64_t v = a.coeff(i);
    if (v & 1U) throw Error("element not even");
    half[i] = v >> 1;
  }
  return RingElem::from_coeffs(out, half);
}

// 2a for a in R_{k-1}, returned in R_k. Well defined since 2a mod 2^k only
// depends on a mod 2^(k-1).
inline RingElem double_into(const RingElem& a, const RingCtx& out) {
  if (&out.modulus() != &a.ctx().modulus() || a.ctx().k() + 1 != out.k()) {
    throw Error("context mismatch");
  }
  std::vector<std::uint64_t> twice(a.coeffs().size());
  for (std::size_t i = 0; i < twice.size(); ++i) twice[i] = a.coeff(i) << 1;
  return RingElem::from_coeffs(out, twice);
}

// "2x^5+2x^4+2x^3": descending exponents, unit coefficients omitted.
inline std::string to_string(const RingElem& a) {
  std::string out;
  for (std::size_t i = a.coeffs().size(); i-- > 0;) {
    const std::uint64_t c = a.coeff(i);
    if (c == 0) continue;
    if (!out.empty()) out += '+';
    if (i == 0) {
      out += std::to_string(c);
      continue;
    }
    if (c != 1) out += std::to_string(c);
    out += i == 1 ? std::string("x") : "x^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

}  // namespace permod
