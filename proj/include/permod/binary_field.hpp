#pragma once

// Packed arithmetic in F = GF(2)[x]/(p(x)). Elements are fixed-width word
// arrays of words() words; this is the inner loop behind every mod-2
// determinant, rank and null vector in the library.

#include <cstdint>
#include <span>
#include <vector>

#include "permod/error.hpp"
#include "permod/gf2poly.hpp"

namespace permod {

class BinaryField {
 public:
  using Elem = std::vector<std::uint64_t>;
  using View = std::span<const std::uint64_t>;
  using MutView = std::span<std::uint64_t>;

  explicit BinaryField(GfPoly modulus) : mod_(std::move(modulus)), reducer_(mod_) {
    if (mod_.degree() < 1) throw Error("degree too small");
    d_ = static_cast<std::size_t>(mod_.degree());
    w_ = (d_ + 63) / 64;
  }

  std::size_t degree() const { return d_; }
  std::size_t words() const { return w_; }
  const GfPoly& modulus() const { return mod_; }

  Elem zero() const { return Elem(w_, 0); }
  Elem one() const {
    Elem e(w_, 0);
    e[0] = 1;
    return e;
  }

  Elem from_poly(const GfPoly& p) const {
    const GfPoly r = p.degree() >= static_cast<std::int64_t>(d_) ? p % mod_ : p;
    Elem e(w_, 0);
    std::copy(r.words().begin(), r.words().end(), e.begin());
    return e;
  }

  GfPoly to_poly(View a) const { return GfPoly::from_words(Elem(a.begin(), a.end())); }

  static bool is_zero(View a) {
    for (std::uint64_t v : a) {
      if (v != 0) return false;
    }
    return true;
  }

  static bool is_one(View a) {
    if (a.empty() || a[0] != 1) return false;
    for (std::size_t i = 1; i < a.size(); ++i) {
      if (a[i] != 0) return false;
    }
    return true;
  }

  static void add_to(MutView acc, View a) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] ^= a[i];
  }

  // out = a * b; out may alias either input.
  void mul(View a, View b, MutView out) const {
    thread_local std::vector<std::uint64_t> wide;
    wide.assign(2 * w_, 0);
    detail::clmul_words(a, b, wide);
    reducer_.reduce(wide);
    std::copy(wide.begin(), wide.begin() + static_cast<std::ptrdiff_t>(w_), out.begin());
  }

  // acc += a * b
  void mul_add(View a, View b, MutView acc) const {
    thread_local std::vector<std::uint64_t> wide;
    wide.assign(2 * w_, 0);
    detail::clmul_words(a, b, wide);
    reducer_.reduce(wide);
    for (std::size_t i = 0; i < w_; ++i) acc[i] ^= wide[i];
  }

  void sqr(View a, MutView out) const {
    thread_local std::vector<std::uint64_t> wide;
    wide.assign(2 * w_, 0);
    detail::square_words(a, wide);
    reducer_.reduce(wide);
    std::copy(wide.begin(), wide.begin() + static_cast<std::ptrdiff_t>(w_), out.begin());
  }

  Elem mul(View a, View b) const {
    Elem out(w_);
    mul(a, b, out);
    return out;
  }

  // a^(q-2) with q = 2^d, which is a^-1 for a != 0. The exponent is
  // 2*(2^(d-1) - 1); the inner power is built by doubling its run of ones
  // (b_{2m} = b_m^(2^m) * b_m), so the cost is d squarings plus O(log d)
  // multiplications.
  void inv(View a, MutView out) const {
    if (is_zero(a)) throw Error("zero inverse");
    if (d_ == 1) {
      std::copy(a.begin(), a.end(), out.begin());
      return;
    }
    const std::size_t e = d_ - 1;  // want beta = a^(2^e - 1)
    Elem beta(a.begin(), a.end());
    Elem tmp(w_);
    std::size_t m = 1;
    const int top = 63 - std::countl_zero(static_cast<std::uint64_t>(e));
    for (int bit = top - 1; bit >= 0; --bit) {
      // beta_{2m} = beta_m^(2^m) * beta_m
      tmp = beta;
      for (std::size_t s = 0; s < m; ++s) sqr(tmp, tmp);
      mul(tmp, beta, beta);
      m *= 2;
      if ((e >> bit) & 1U) {
        sqr(beta, beta);
        mul(beta, a, beta);
        m += 1;
      }
    }
    sqr(beta, out);
  }

  Elem inv(View a) const {
    Elem out(w_);
    inv(a, out);
    return out;
  }

  Elem pow(View a, std::uint64_t e) const {
    Elem result = one();
    Elem base(a.begin(), a.end());
    while (e != 0) {
      if (e & 1U) mul(result, base, result);
      e >>= 1;
      if (e != 0) sqr(base, base);
    }
    return result;
  }

  friend bool operator==(const BinaryField& a, const BinaryField& b) { return a.mod_ == b.mod_; }

 private:
  GfPoly mod_;
  detail::Reducer reducer_;
  std::size_t d_ = 0;
  std::size_t w_ = 0;
};

}  // namespace permod
