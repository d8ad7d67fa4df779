#pragma once

// Integer polynomials with arbitrary precision coefficients. Used for
// matrix input and for the exact expansion oracles.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "permod/error.hpp"
#include "permod/matrix.hpp"
#include "permod/ring.hpp"

namespace permod {

using BigInt = boost::multiprecision::cpp_int;

class ZxPoly {
 public:
  ZxPoly() = default;
  explicit ZxPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }

  static ZxPoly constant(const BigInt& v) { return ZxPoly(std::vector<BigInt>{v}); }
  static ZxPoly monomial(std::size_t e, const BigInt& c = 1) {
    std::vector<BigInt> v(e + 1, 0);
    v[e] = c;
    return ZxPoly(std::move(v));
  }

  // -1 for the zero polynomial.
  std::int64_t degree() const { return static_cast<std::int64_t>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<BigInt>& coeffs() const { return c_; }
  BigInt coeff(std::size_t i) const { return i < c_.size() ? c_[i] : BigInt(0); }

  ZxPoly& operator+=(const ZxPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  ZxPoly& operator-=(const ZxPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend ZxPoly operator+(ZxPoly a, const ZxPoly& b) { return a += b; }
  friend ZxPoly operator-(ZxPoly a, const ZxPoly& b) { return a -= b; }
  friend ZxPoly operator*(const ZxPoly& a, const ZxPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<BigInt> out(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return ZxPoly(std::move(out));
  }
  friend bool operator==(const ZxPoly& a, const ZxPoly& b) { return a.c_ == b.c_; }

  // Coefficients reduced into [0, 2^k), constant term first.
  std::vector<std::uint64_t> mod2k(unsigned k) const {
    const BigInt m = BigInt(1) << k;
    std::vector<std::uint64_t> out(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) {
      BigInt r = c_[i] % m;
      if (r < 0) r += m;
      out[i] = static_cast<std::uint64_t>(r);
    }
    return out;
  }

  ZxPoly reduced_mod2k(unsigned k) const {
    std::vector<BigInt> out;
    for (std::uint64_t v : mod2k(k)) out.emplace_back(v);
    return ZxPoly(std::move(out));
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<BigInt> c_;
};

// "2x^5-x^2+3"; "0" for zero.
inline std::string to_string(const ZxPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (std::size_t i = p.coeffs().size(); i-- > 0;) {
    BigInt c = p.coeffs()[i];
    if (c == 0) continue;
    const bool neg = c < 0;
    if (neg) c = -c;
    if (neg) {
      out += '-';
    } else if (!out.empty()) {
      out += '+';
    }
    if (i == 0 || c != 1) out += c.str();
    if (i >= 1) out += i == 1 ? std::string("x") : "x^" + std::to_string(i);
  }
  return out;
}

// Accepts the to_string format: signed terms "c", "cx", "cx^e", "x^e".
inline ZxPoly parse_zxpoly(std::string_view text) {
  std::vector<BigInt> coeffs;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto read_uint = [&](std::string& digits) {
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) digits += text[i++];
  };
  skip_ws();
  if (i == text.size()) throw Error("empty polynomial");
  bool first = true;
  while (true) {
    skip_ws();
    if (i == text.size()) break;
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') {
      neg = text[i] == '-';
      ++i;
      skip_ws();
    } else if (!first) {
      throw Error("expected '+' or '-' in polynomial '" + std::string(text) + "'");
    }
    first = false;
    std::string digits;
    read_uint(digits);
    BigInt c = digits.empty() ? BigInt(1) : BigInt(digits);
    std::size_t e = 0;
    if (i < text.size() && text[i] == '*') ++i;
    if (i < text.size() && text[i] == 'x') {
      ++i;
      e = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        std::string ed;
        read_uint(ed);
        if (ed.empty()) throw Error("missing exponent in polynomial '" + std::string(text) + "'");
        e = std::stoul(ed);
      }
    } else if (digits.empty()) {
      throw Error("malformed term in polynomial '" + std::string(text) + "'");
    }
    if (coeffs.size() <= e) coeffs.resize(e + 1, 0);
    coeffs[e] += neg ? BigInt(-c) : c;
  }
  return ZxPoly(std::move(coeffs));
}

using ZxMatrix = Matrix<ZxPoly>;

inline std::size_t max_degree(const ZxMatrix& a) {
  std::int64_t d = 0;
  for (const auto& e : a.data()) d = std::max(d, e.degree());
  return static_cast<std::size_t>(d);
}

inline RingElem to_ring(const ZxPoly& p, const RingCtx& ctx) {
  return RingElem::from_coeffs(ctx, p.mod2k(ctx.k()));
}

inline Matrix<RingElem> to_ring(const ZxMatrix& a, const RingCtx& ctx) {
  Matrix<RingElem> out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = to_ring(a(i, j), ctx);
  }
  return out;
}

inline ZxPoly to_zx(const RingElem& a) {
  std::vector<BigInt> c;
  for (std::uint64_t v : a.coeffs()) c.emplace_back(v);
  return ZxPoly(std::move(c));
}

}  // namespace permod
