#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support.hpp"

using namespace permod;
using permod::test::elem;
using permod::test::mat;
using permod::test::random_mat;
using permod::test::random_zx;
using permod::test::ring64;
using permod::test::zx;

TEST(Permanent, Mod2) {
  const RingCtx& f = ring64(1);
  EXPECT_TRUE(perm_mod2(mat(f, test::kExample1), f).is_zero());
  EXPECT_TRUE(perm_mod2(identity(f, 4), f).is_one());
  EXPECT_TRUE(perm_mod2(mat(f, {{"x", "x+1"}, {"x", "x+1"}}), f).is_zero());
}

TEST(Permanent, Example1) {
  const RingCtx& r = ring64(2);
  PermTrace tr;
  const RingElem p = perm_mod2k(mat(r, test::kExample1), r, {}, &tr);
  EXPECT_EQ(p, elem(r, "2x^5+2x^4+2x^3"));
  ASSERT_TRUE(tr.singular);
  const RingCtx& f = ring64(1);
  EXPECT_EQ(tr.v, (std::vector<RingElem>{elem(f, "x^3+1"), elem(f, "x^5+x"), f.one()}));
  EXPECT_EQ(tr.pivot_row, 2U);
  EXPECT_EQ(tr.b, (std::vector<RingElem>{elem(f, "x^2"), elem(f, "x^3"), elem(f, "x^3+x^2")}));
}

TEST(Permanent, Example2) {
  const RingCtx& r = ring64(2);
  PermTrace tr;
  const RingElem p = perm_mod2k(mat(r, test::kExample2), r, {}, &tr);
  // Direct expansion: x^3 + x^2 + x^3 + x + x^5 + x^4.
  EXPECT_EQ(p, elem(r, "x^5+x^4+2x^3+x^2+x"));
  EXPECT_EQ(p, brute_permanent(mat(r, test::kExample2), r));
  ASSERT_FALSE(tr.singular);
  EXPECT_EQ(tr.order, (std::vector<std::size_t>{0, 2, 1}));
  EXPECT_EQ(project_mod2(tr.y.at(3)), elem(ring64(1), "x^3+1"));
  EXPECT_EQ(project_mod2(tr.y.at(2)), elem(ring64(1), "x^2+x"));
}

TEST(Permanent, IdentityAndAnchors) {
  for (unsigned k = 1; k <= 5; ++k) {
    const RingCtx& r = ring64(k);
    EXPECT_TRUE(perm_mod2k(identity(r, 5), r).is_one());
    EXPECT_TRUE(perm_mod2k(MatR(0, 0, r.zero()), r).is_one());
    const RingElem e = elem(r, "3x^2+x+1");
    EXPECT_EQ(perm_mod2k(MatR(1, 1, e), r), e);
  }
  EXPECT_THROW(perm_mod2k(identity(ring64(2), 2), ring64(3)), Error);
}

TEST(Permanent, RandomRingMatricesAgainstExpansion) {
  std::mt19937_64 rng(41);
  for (unsigned k = 1; k <= 4; ++k) {
    const RingCtx& r = RingCtx::get(k, parse_gf2poly("x^6+x^3+1"));
    for (int it = 0; it < 15; ++it) {
      const MatR a = random_mat(rng, r, 1 + rng() % 5);
      EXPECT_EQ(perm_mod2k(a, r), brute_permanent(a, r));
    }
  }
}

TEST(Permanent, RandomZxAgainstExpansion) {
  std::mt19937_64 rng(42);
  for (int it = 0; it < 20; ++it) {
    const unsigned k = 1 + rng() % 4;
    const ZxMatrix a = random_zx(rng, 1 + rng() % 5, 2, 7);
    EXPECT_EQ(perm_zx_mod2k(a, k), brute_permanent(a).reduced_mod2k(k));
  }
}

TEST(Permanent, ZxExamples) {
  EXPECT_EQ(to_string(perm_zx_mod2k(zx(test::kExample1), 2)), "2x^5+2x^4+2x^3");
  const ZxMatrix one = zx({{"13x^2-5x+9"}});
  EXPECT_EQ(perm_zx_mod2k(one, 3), parse_zxpoly("5x^2+3x+1"));
  EXPECT_EQ(brute_permanent(zx(test::kExample1)), parse_zxpoly("2x^5+6x^4+2x^3+12x^2+12x"));
}

TEST(Permanent, RowSwapInvarianceAndLinearity) {
  std::mt19937_64 rng(43);
  const RingCtx& r = ring64(3);
  for (int it = 0; it < 10; ++it) {
    const std::size_t n = 2 + rng() % 4;
    const MatR a = random_mat(rng, r, n);
    std::vector<std::size_t> order(n), cols(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = cols[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    EXPECT_EQ(perm_mod2k(select(a, order, cols), r), perm_mod2k(a, r));
    MatR b = a;
    const RingElem s = test::random_elem(rng, r);
    const std::size_t row = rng() % n;
    for (std::size_t j = 0; j < n; ++j) b(row, j) = s * a(row, j);
    EXPECT_EQ(perm_mod2k(b, r), s * perm_mod2k(a, r));
  }
}

TEST(Permanent, Interpolation) {
  const ZxMatrix a1 = zx(test::kExample1);
  EXPECT_EQ(perm_interpolate(a1, 1), perm_zx_mod2k(a1, 1));
  EXPECT_EQ(perm_interpolate(zx({{"x", "1"}, {"1", "x"}}), 2), parse_zxpoly("x^2+1"));
  EXPECT_EQ(to_string(perm_interpolate(a1, 2)), "2x^5+2x^4+2x^3");
  PermOptions tight;
  tight.budget = 10;
  EXPECT_THROW(perm_interpolate(a1, 2, tight), Error);
}

TEST(Permanent, PowerSums) {
  const RingCtx& f4 = test::gf4();
  for (std::uint64_t m = 0; m <= 6; ++m) {
    EXPECT_EQ(power_sum(f4, m).is_one(), m % 3 == 0) << m;
    EXPECT_EQ(power_sum(f4, m).is_zero(), m % 3 != 0) << m;
  }
  for (unsigned k = 1; k <= 3; ++k) {
    const RingCtx& r = RingCtx::get(k, parse_gf2poly("x^2+x+1"));
    for (std::uint64_t m = 0; m <= 6; ++m) {
      const RingElem s = tuple_power_sum(r, m);
      EXPECT_TRUE(m % 3 == 0 ? s.is_one() : s.is_zero()) << k << " " << m;
    }
  }
}

TEST(Permanent, WorkerCountsAgree) {
  std::mt19937_64 rng(44);
  const ZxMatrix a = random_zx(rng, 6, 3, 9);
  const ZxPoly base = perm_zx_mod2k(a, 4, {1, 0});
  for (unsigned w : {2U, 8U}) EXPECT_EQ(perm_zx_mod2k(a, 4, {w, 0}), base);
}
