#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace permod;
using permod::test::elem;
using permod::test::gf4;
using permod::test::random_mat;

TEST(Oracles, BrutePermanent) {
  EXPECT_EQ(brute_permanent(test::zx(test::kExample1)), parse_zxpoly("2x^5+6x^4+2x^3+12x^2+12x"));
  EXPECT_EQ(brute_permanent(test::zx(test::kExample2)), parse_zxpoly("x^5+x^4+2x^3+x^2+x"));
  const RingCtx& r = test::ring64(3);
  EXPECT_TRUE(brute_permanent(identity(r, 4), r).is_one());
  EXPECT_THROW(brute_permanent(ZxMatrix(10, 10, ZxPoly{})), Error);
}

TEST(Oracles, BruteHafnian) {
  SymMatZ k4(4, 4, 1);
  for (std::size_t i = 0; i < 4; ++i) k4(i, i) = 0;
  EXPECT_EQ(brute_hafnian(k4), 3);
  SymMatZ two(2, 2, 0);
  two(0, 1) = two(1, 0) = -17;
  EXPECT_EQ(brute_hafnian(two), -17);
  EXPECT_EQ(brute_hafnian(SymMatZ(0, 0, 0)), 1);
  EXPECT_THROW(brute_hafnian(SymMatZ(12, 12, 0)), Error);
}

TEST(Oracles, BruteCycles) {
  EXPECT_EQ(brute_disjoint_cycles(MarkedInstance{test::triangle(), {0}}, 1).min_len3, 3U);
  EXPECT_EQ(brute_disjoint_cycles(MarkedInstance{test::two_triangles(), {0, 3}}, 2).min_len3, 6U);
  const WeightedGraph path = test::graph(3, {{0, 1, 1}, {1, 2, 1}});
  const auto none = brute_disjoint_cycles(MarkedInstance{path, {0}}, 1);
  EXPECT_FALSE(none.min_len3);
  // Walking the marked edge back and forth is a length-2 cycle.
  EXPECT_EQ(none.min_len2, 2U);
}

TEST(Oracles, ExtEuclid) {
  EXPECT_EQ(ext_euclid_inverse(elem(gf4(), "x")), elem(gf4(), "x+1"));
  EXPECT_EQ(ext_euclid_inverse(gf4().one()), gf4().one());
  const RingCtx& f = test::ring64(1);
  for (std::uint64_t w = 1; w < 64; ++w) {
    std::vector<std::uint64_t> c(6);
    for (std::size_t i = 0; i < 6; ++i) c[i] = (w >> i) & 1U;
    const RingElem a = RingElem::from_coeffs(f, c);
    EXPECT_EQ(ext_euclid_inverse(a), field_inverse(a));
  }
  EXPECT_THROW(ext_euclid_inverse(f.zero()), Error);
}

TEST(Oracles, RankViaCharpoly) {
  EXPECT_EQ(rank_via_charpoly(identity(gf4(), 2)), 2U);
  EXPECT_EQ(rank_via_charpoly(MatF(3, 3, gf4().zero())), 0U);
  std::mt19937_64 rng(71);
  for (int it = 0; it < 30; ++it) {
    MatF a = random_mat(rng, gf4(), 3);
    if (it % 3 == 0) {
      for (std::size_t j = 0; j < 3; ++j) a(2, j) = a(0, j) * a(1, 1);
    }
    EXPECT_EQ(rank_via_charpoly(a), rank_f(a));
  }
  EXPECT_THROW(rank_via_charpoly(identity(gf4(), 5)), Error);
}

TEST(Oracles, CompanionEmbedding) {
  EXPECT_TRUE(companion_embedding_check(parse_zxpoly("x"), parse_zxpoly("x"), 3));
  EXPECT_TRUE(companion_embedding_check(parse_zxpoly("x+1"), parse_zxpoly("x^2+1"), 4));
  EXPECT_THROW(companion_embedding_check(parse_zxpoly("x^2"), parse_zxpoly("x^2"), 4), Error);
}

TEST(Oracles, MahajanVinay) {
  EXPECT_TRUE(mv_det_check(identity(gf4(), 2)));
  MatF swap(2, 2, gf4().zero());
  swap(0, 1) = swap(1, 0) = gf4().one();
  EXPECT_TRUE(mv_det_check(swap));
  std::mt19937_64 rng(72);
  for (int it = 0; it < 30; ++it) EXPECT_TRUE(mv_det_check(random_mat(rng, gf4(), 3)));
  EXPECT_THROW(mv_det_check(identity(gf4(), 4)), Error);
}
