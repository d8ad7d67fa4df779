#pragma once

// Polynomials over GF(2), stored as packed bit vectors.
//
// Bit i of word i/64 holds the coefficient of x^i. The word vector never
// carries trailing zero words, so two equal polynomials have equal storage
// and the zero polynomial is the empty vector.

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#if defined(__PCLMUL__)
#include <emmintrin.h>
#include <wmmintrin.h>
#endif

#include "permod/error.hpp"

namespace permod {

namespace detail {

// Carry-less 64x64 -> 128 bit product.
inline void clmul64(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi) {
#if defined(__PCLMUL__)
  const __m128i r = _mm_clmulepi64_si128(_mm_cvtsi64_si128(static_cast<long long>(a)),
                                         _mm_cvtsi64_si128(static_cast<long long>(b)), 0x00);
  lo = static_cast<std::uint64_t>(_mm_cvtsi128_si64(r));
  hi = static_cast<std::uint64_t>(_mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)));
#else
  lo = 0;
  hi = 0;
  for (int i = 0; i < 64; ++i) {
    if ((b >> i) & 1U) {
      lo ^= a << i;
      if (i != 0) hi ^= a >> (64 - i);
    }
  }
#endif
}

// out[0 .. a.size()+b.size()) = a * b over GF(2). `out` must not alias inputs.
inline void clmul_words(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                        std::span<std::uint64_t> out) {
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(a.size() + b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::uint64_t lo = 0;
      std::uint64_t hi = 0;
      clmul64(a[i], b[j], lo, hi);
      out[i + j] ^= lo;
      out[i + j + 1] ^= hi;
    }
  }
}

// out[0 .. 2*a.size()) = a^2 over GF(2).
inline void square_words(std::span<const std::uint64_t> a, std::span<std::uint64_t> out) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    clmul64(a[i], a[i], out[2 * i], out[2 * i + 1]);
  }
}

// dst ^= src << shift, truncated to dst.size() words.
inline void xor_shifted(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src,
                        std::size_t shift) {
  const std::size_t ws = shift / 64;
  const unsigned bs = static_cast<unsigned>(shift % 64);
  for (std::size_t i = 0; i < src.size(); ++i) {
    const std::size_t at = i + ws;
    if (at >= dst.size()) break;
    if (bs == 0) {
      dst[at] ^= src[i];
    } else {
      dst[at] ^= src[i] << bs;
      if (at + 1 < dst.size()) dst[at + 1] ^= src[i] >> (64 - bs);
    }
  }
}

// out = src >> shift (out.size() words written).
inline void shift_right(std::span<const std::uint64_t> src, std::size_t shift,
                        std::span<std::uint64_t> out) {
  const std::size_t ws = shift / 64;
  const unsigned bs = static_cast<unsigned>(shift % 64);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t at = i + ws;
    std::uint64_t v = at < src.size() ? src[at] >> bs : 0;
    if (bs != 0 && at + 1 < src.size()) v |= src[at + 1] << (64 - bs);
    out[i] = v;
  }
}

inline std::int64_t degree_of_words(std::span<const std::uint64_t> w) {
  for (std::size_t i = w.size(); i-- > 0;) {
    if (w[i] != 0) return static_cast<std::int64_t>(64 * i + 63 - std::countl_zero(w[i]));
  }
  return std::numeric_limits<std::int64_t>::min();
}

}  // namespace detail

class GfPoly {
 public:
  // Degree reported for the zero polynomial.
  static constexpr std::int64_t kMinusInfinity = std::numeric_limits<std::int64_t>::min();

  GfPoly() = default;

  static GfPoly from_words(std::vector<std::uint64_t> words) {
    GfPoly p;
    p.w_ = std::move(words);
    p.trim();
    return p;
  }

  static GfPoly monomial(std::size_t e) {
    GfPoly p;
    p.w_.assign(e / 64 + 1, 0);
    p.w_.back() = std::uint64_t{1} << (e % 64);
    return p;
  }

  static GfPoly one() { return monomial(0); }

  static GfPoly from_exponents(std::initializer_list<std::size_t> exps) {
    GfPoly p;
    for (std::size_t e : exps) p.flip(e);
    return p;
  }

  std::int64_t degree() const { return detail::degree_of_words(w_); }
  bool is_zero() const { return w_.empty(); }
  bool is_one() const { return w_.size() == 1 && w_[0] == 1; }

  bool coeff(std::size_t i) const {
    return i / 64 < w_.size() && ((w_[i / 64] >> (i % 64)) & 1U) != 0;
  }

  void flip(std::size_t i) {
    if (i / 64 >= w_.size()) w_.resize(i / 64 + 1, 0);
    w_[i / 64] ^= std::uint64_t{1} << (i % 64);
    trim();
  }

  std::span<const std::uint64_t> words() const { return w_; }

  // Exponents with a set coefficient, ascending.
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < w_.size(); ++i) {
      std::uint64_t v = w_[i];
      while (v != 0) {
        out.push_back(64 * i + static_cast<std::size_t>(std::countr_zero(v)));
        v &= v - 1;
      }
    }
    return out;
  }

  GfPoly& operator+=(const GfPoly& o) {
    if (o.w_.size() > w_.size()) w_.resize(o.w_.size(), 0);
    for (std::size_t i = 0; i < o.w_.size(); ++i) w_[i] ^= o.w_[i];
    trim();
    return *this;
  }

  friend GfPoly operator+(GfPoly a, const GfPoly& b) { return a += b; }
  friend GfPoly operator-(GfPoly a, const GfPoly& b) { return a += b; }

  friend GfPoly operator*(const GfPoly& a, const GfPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<std::uint64_t> out(a.w_.size() + b.w_.size());
    detail::clmul_words(a.w_, b.w_, out);
    return from_words(std::move(out));
  }

  GfPoly shifted(std::size_t s) const {
    if (is_zero()) return {};
    std::vector<std::uint64_t> out(w_.size() + s / 64 + 1, 0);
    detail::xor_shifted(out, w_, s);
    return from_words(std::move(out));
  }

  friend bool operator==(const GfPoly&, const GfPoly&) = default;

 private:
  void trim() {
    while (!w_.empty() && w_.back() == 0) w_.pop_back();
  }

  std::vector<std::uint64_t> w_;
};

namespace detail {

// Reduction modulo a fixed polynomial m of degree d. Sparse moduli (few set
// bits below x^d) fold the high part back word-wise; dense ones fall back to
// bitwise long division.
class Reducer {
 public:
  Reducer() = default;
  explicit Reducer(const GfPoly& m) : mod_(m) {
    if (m.is_zero()) throw Error("zero modulus");
    d_ = static_cast<std::size_t>(m.degree());
    for (std::size_t e : m.support()) {
      if (e < d_) taps_.push_back(e);
    }
    sparse_ = taps_.size() <= 8;
  }

  std::size_t degree() const { return d_; }
  // Words needed to hold a reduced value (degree < d).
  std::size_t words() const { return d_ == 0 ? 1 : (d_ + 63) / 64; }

  // Reduces `wide` in place; the result occupies its low words().
  void reduce(std::span<std::uint64_t> wide) const {
    if (d_ == 0) {
      std::fill(wide.begin(), wide.end(), 0);
      return;
    }
    if (!sparse_) {
      while (true) {
        const std::int64_t dw = degree_of_words(wide);
        if (dw == GfPoly::kMinusInfinity || dw < static_cast<std::int64_t>(d_)) break;
        xor_shifted(wide, mod_.words(), static_cast<std::size_t>(dw) - d_);
      }
      return;
    }
    thread_local std::vector<std::uint64_t> hi;
    while (true) {
      const std::int64_t dw = degree_of_words(wide);
      if (dw == GfPoly::kMinusInfinity || dw < static_cast<std::int64_t>(d_)) break;
      const std::size_t hi_words = (static_cast<std::size_t>(dw) - d_) / 64 + 1;
      hi.assign(hi_words, 0);
      shift_right(wide, d_, hi);
      // clear bits >= d
      const std::size_t w0 = d_ / 64;
      const unsigned b0 = static_cast<unsigned>(d_ % 64);
      if (w0 < wide.size()) {
        wide[w0] &= b0 == 0 ? 0 : ((std::uint64_t{1} << b0) - 1);
        std::fill(wide.begin() + static_cast<std::ptrdiff_t>(w0) + 1, wide.end(), 0);
      }
      for (std::size_t t : taps_) xor_shifted(wide, hi, t);
    }
  }

 private:
  GfPoly mod_;
  std::size_t d_ = 0;
  std::vector<std::size_t> taps_;
  bool sparse_ = false;
};

}  // namespace detail

// Quotient and remainder of a by m.
inline std::pair<GfPoly, GfPoly> divmod(const GfPoly& a, const GfPoly& m) {
  if (m.is_zero()) throw Error("zero modulus");
  const std::int64_t dm = m.degree();
  std::int64_t da = a.degree();
  if (a.is_zero() || da < dm) return {GfPoly{}, a};
  std::vector<std::uint64_t> r(a.words().begin(), a.words().end());
  std::vector<std::uint64_t> q(static_cast<std::size_t>(da - dm) / 64 + 1, 0);
  while (true) {
    da = detail::degree_of_words(r);
    if (da == GfPoly::kMinusInfinity || da < dm) break;
    const auto s = static_cast<std::size_t>(da - dm);
    q[s / 64] ^= std::uint64_t{1} << (s % 64);
    detail::xor_shifted(r, m.words(), s);
  }
  return {GfPoly::from_words(std::move(q)), GfPoly::from_words(std::move(r))};
}

inline GfPoly operator%(const GfPoly& a, const GfPoly& m) { return divmod(a, m).second; }

inline GfPoly gf2_mul_mod(const GfPoly& a, const GfPoly& b, const GfPoly& m) {
  if (m.is_zero()) throw Error("zero modulus");
  return (a * b) % m;
}

inline GfPoly gcd(GfPoly a, GfPoly b) {
  while (!b.is_zero()) {
    GfPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Distinct-degree test: f of degree d is irreducible iff x^(2^d) = x mod f
// and gcd(x^(2^(d/r)) - x, f) = 1 for every prime r dividing d.
inline bool is_irreducible(const GfPoly& f) {
  const std::int64_t d = f.degree();
  if (d < 1) throw Error("degree too small");
  if (d == 1) return true;
  if (!f.coeff(0)) return false;  // divisible by x

  std::vector<std::int64_t> prime_divisors;
  {
    std::int64_t rest = d;
    for (std::int64_t r = 2; r * r <= rest; ++r) {
      if (rest % r == 0) {
        prime_divisors.push_back(r);
        while (rest % r == 0) rest /= r;
      }
    }
    if (rest > 1) prime_divisors.push_back(rest);
  }

  const GfPoly x = GfPoly::monomial(1);
  const detail::Reducer reducer(f);
  GfPoly power = x;  // x^(2^i) mod f
  std::vector<std::uint64_t> wide;
  for (std::int64_t i = 1; i <= d; ++i) {
    wide.assign(2 * power.words().size() + 1, 0);
    detail::square_words(power.words(), wide);
    reducer.reduce(wide);
    power = GfPoly::from_words(wide);
    for (std::int64_t r : prime_divisors) {
      if (i == d / r && !gcd(power + x, f).is_one()) return false;
    }
  }
  return power == x;
}

// x^(2*3^l) + x^(3^l) + 1 for the smallest l >= 0 with 2*3^l >= min_degree.
// Every member of this family is irreducible over GF(2).
inline GfPoly select_trinomial(std::size_t min_degree) {
  if (min_degree == 0) throw Error("min_degree must be positive");
  std::size_t three_l = 1;
  while (2 * three_l < min_degree) three_l *= 3;
  return GfPoly::from_exponents({2 * three_l, three_l, 0});
}

// "x^6+x^3+1"; the zero polynomial prints as "0".
inline std::string to_string(const GfPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  const auto exps = p.support();
  for (auto it = exps.rbegin(); it != exps.rend(); ++it) {
    if (!out.empty()) out += '+';
    if (*it == 0) {
      out += '1';
    } else if (*it == 1) {
      out += 'x';
    } else {
      out += "x^" + std::to_string(*it);
    }
  }
  return out;
}

// Inverse of to_string. Terms may carry integer coefficients, reduced mod 2.
inline GfPoly parse_gf2poly(std::string_view text) {
  GfPoly p;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto read_uint = [&](std::size_t& out) {
    const std::size_t start = i;
    out = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      out = out * 10 + static_cast<std::size_t>(text[i] - '0');
      ++i;
    }
    return i > start;
  };
  skip_ws();
  if (i == text.size()) throw Error("empty polynomial");
  while (true) {
    skip_ws();
    std::size_t coef = 0;
    const bool has_coef = read_uint(coef);
    if (!has_coef) coef = 1;
    skip_ws();
    std::size_t exp = 0;
    if (i < text.size() && text[i] == 'x') {
      ++i;
      exp = 1;
      skip_ws();
      if (i < text.size() && text[i] == '^') {
        ++i;
        skip_ws();
        if (!read_uint(exp)) throw Error("bad exponent in polynomial");
      }
    } else if (!has_coef) {
      throw Error("bad term in polynomial");
    }
    if (coef % 2 == 1) p.flip(exp);
    skip_ws();
    if (i == text.size()) break;
    if (text[i] != '+') throw Error("unexpected character in polynomial");
    ++i;
  }
  return p;
}

}  // namespace permod
