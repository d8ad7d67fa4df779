#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support.hpp"

using namespace permod;
using permod::test::graph;
using permod::test::random_connected;
using permod::test::triangle;
using permod::test::two_triangles;

namespace {

const RingCtx& f_ctx() { return RingCtx::get(1, select_trinomial(20)); }

// 4-cycle 0-1-2-3 with chord 0-2 (weight 5) and unit sides.
WeightedGraph square_with_chord() { return graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}, {0, 2, 5}}); }

// Signed cycle-cover sum by expansion: used to cross-check pattern matrices.
RingElem cover_sum(const MatR& a, const RingCtx& ctx) { return brute_permanent(a, ctx); }

}  // namespace

TEST(Sdc, PatternMatrixTriangle) {
  const MarkedInstance inst{triangle(), {0}};
  const RingCtx& f = f_ctx();
  const MatR m = pattern_matrix(inst, p_patterns(inst)[0], f);
  EXPECT_EQ(m(0, 1), RingElem::monomial(f, 1));
  EXPECT_TRUE(m(0, 0).is_zero());
  EXPECT_TRUE(m(0, 2).is_zero());
  EXPECT_TRUE(m(2, 2).is_one());
  EXPECT_TRUE(m(1, 1).is_zero());
  EXPECT_TRUE(m(1, 0).is_zero());  // reverse arc of the forced edge
  EXPECT_EQ(m(1, 2), RingElem::monomial(f, 1));
}

TEST(Sdc, PatternMatrixEmptyPattern) {
  const MarkedInstance inst{triangle(), {0}};
  const RingCtx& f = f_ctx();
  const MatR m = pattern_matrix(inst, Pattern{}, f);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) {
        EXPECT_EQ(m(i, i).is_one(), i == 2);
      } else {
        EXPECT_EQ(m(i, j), RingElem::monomial(f, 1));
      }
    }
  }
}

TEST(Sdc, PatternMatrixErrors) {
  const MarkedInstance inst{triangle(), {0}};
  Pattern bad;
  bad.arcs.push_back({2, 0, 1, true});
  EXPECT_THROW(pattern_matrix(inst, bad, f_ctx()), Error);
  Pattern twice;
  twice.arcs.push_back({0, 1, 1, true});
  twice.arcs.push_back({0, 1, 1, true});
  EXPECT_THROW(pattern_matrix(inst, twice, f_ctx()), Error);
}

TEST(Sdc, BothOrientationsOfFourCycle) {
  // With the marked edge forced either way, the two permanents together
  // count each orientation of the 4-cycle once.
  const WeightedGraph g = graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}});
  const MarkedInstance inst{g, {0}};
  const RingCtx& r = RingCtx::get(3, select_trinomial(20));
  Pattern fwd, back;
  fwd.arcs.push_back({0, 1, 1, true});
  back.arcs.push_back({1, 0, 1, true});
  const RingElem total = perm_mod2k(pattern_matrix(inst, fwd, r), r) +
                         perm_mod2k(pattern_matrix(inst, back, r), r);
  EXPECT_EQ(total, RingElem::monomial(r, 4) + RingElem::monomial(r, 4));
  EXPECT_EQ(total, cover_sum(pattern_matrix(inst, fwd, r), r) + cover_sum(pattern_matrix(inst, back, r), r));
}

TEST(Sdc, F1Examples) {
  const RingElem tri = f1(MarkedInstance{triangle(), {0}});
  EXPECT_EQ(lowest_exponent(tri), std::optional<std::size_t>(3));

  // Marked edge 2-3 is a bridge to the pendant vertex 3.
  const WeightedGraph pendant = graph(4, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {2, 3, 1}});
  EXPECT_TRUE(f1(MarkedInstance{pendant, {3}}).is_zero());

  // Two triangles sharing vertex 2, one marked edge in each.
  const WeightedGraph bowtie = graph(5, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {2, 3, 1}, {3, 4, 1}, {2, 4, 1}});
  EXPECT_TRUE(f1(MarkedInstance{bowtie, {0, 4}}).is_zero());
}

TEST(Sdc, F2Examples) {
  const RingElem two = f2(MarkedInstance{two_triangles(), {0, 3}});
  const auto j = lowest_exponent(two);
  ASSERT_TRUE(j);
  EXPECT_EQ(*j, 6U);
  EXPECT_EQ(two.coeff(6), 2U);

  const WeightedGraph k4 = graph(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
  const RingElem f = f2(MarkedInstance{k4, {0, 5}});
  for (std::size_t e = 0; e < 6; ++e) EXPECT_EQ(f.coeff(e), 0U);

  EXPECT_THROW(f2(MarkedInstance{triangle(), {0}}), Error);
}

TEST(Sdc, RandomizeWeights) {
  const WeightedGraph g = graph(3, {{0, 1, 0}, {1, 2, 0}, {0, 2, 0}});
  const WeightedGraph a = randomize_weights(g, 99), b = randomize_weights(g, 99);
  for (std::size_t e = 0; e < 3; ++e) {
    EXPECT_EQ(a.edge(e).w, b.edge(e).w);
    EXPECT_LE(a.edge(e).w, 5U);
  }
  const WeightedGraph t = randomize_weights(triangle(), 5);
  for (std::size_t e = 0; e < 3; ++e) {
    EXPECT_GE(t.edge(e).w, 18U);
    EXPECT_LT(t.edge(e).w, 24U);
  }
}

TEST(Sdc, IsolationRate) {
  // 8-vertex graph with several tied shortest cycles through edge 0.
  const WeightedGraph g = graph(8, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {1, 3, 1}, {3, 0, 1},
                                    {1, 4, 1}, {4, 0, 1}, {4, 5, 1}, {5, 6, 1}, {6, 7, 1}, {7, 4, 1}});
  const MarkedInstance inst{g, {0}};
  ASSERT_GT(count_optimal_cycles(inst, 1), 1U);
  int unique = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const MarkedInstance r{randomize_weights(g, seed), {0}};
    unique += count_optimal_cycles(r, 1) == 1 ? 1 : 0;
  }
  EXPECT_GE(unique, 30);
}

TEST(Sdc, ShortestCycleExamples) {
  EXPECT_EQ(shortest_cycle_through_edges(MarkedInstance{triangle(), {0}}, 1), 3U);
  EXPECT_EQ(shortest_cycle_through_edges(MarkedInstance{square_with_chord(), {4}}, 1), 7U);
  const WeightedGraph pendant = graph(4, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {2, 3, 1}});
  EXPECT_EQ(shortest_cycle_through_edges(MarkedInstance{pendant, {3}}, 1), std::nullopt);
}

TEST(Sdc, TwoDisjointCyclesExamples) {
  EXPECT_EQ(shortest_two_disjoint_cycles(MarkedInstance{two_triangles(), {0, 3}}, 1), 6U);
  const WeightedGraph squares = graph(8, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1},
                                          {4, 5, 1}, {5, 6, 1}, {6, 7, 1}, {7, 4, 1}, {3, 4, 1}});
  EXPECT_EQ(shortest_two_disjoint_cycles(MarkedInstance{squares, {0, 4}}, 1), 8U);
  const WeightedGraph bowtie = graph(5, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {2, 3, 1}, {3, 4, 1}, {2, 4, 1}});
  EXPECT_EQ(shortest_two_disjoint_cycles(MarkedInstance{bowtie, {0, 4}}, 1), std::nullopt);
}

TEST(Sdc, DisjointPathsExamples) {
  // Unique solution: 0-4-1 (length 2) and 2-5-6-3 (length 3).
  const WeightedGraph g = graph(7, {{0, 4, 1}, {4, 1, 1}, {2, 5, 1}, {5, 6, 1}, {6, 3, 1}, {4, 5, 3}});
  EXPECT_EQ(solve_sdp2(g, 0, 1, 2, 3, 1), 5U);
  EXPECT_EQ(solve_sdp2(g, 0, 1, 2, 3, 1), brute_disjoint_paths(g, 0, 1, 2, 3));

  // Greedy shortest paths collide at the hub 4; a detour exists.
  const WeightedGraph hub = graph(7, {{0, 4, 1}, {4, 1, 1}, {2, 4, 1}, {4, 3, 1},
                                      {2, 5, 2}, {5, 6, 2}, {6, 3, 2}});
  EXPECT_EQ(solve_sdp2(hub, 0, 1, 2, 3, 1), brute_disjoint_paths(hub, 0, 1, 2, 3));
  EXPECT_EQ(solve_sdp2(hub, 0, 1, 2, 3, 1), 8U);

  const WeightedGraph pairs = graph(4, {{0, 1, 1}, {2, 3, 1}});
  EXPECT_EQ(solve_sdp2(pairs, 0, 1, 2, 3, 1), 2U);

  EXPECT_THROW(solve_sdp2(pairs, 0, 1, 2, 9, 1), Error);
  EXPECT_THROW(solve_sdp2(pairs, 0, 1, 1, 3, 1), Error);
}

TEST(Sdc, MarkedVertices) {
  EXPECT_EQ(sdce_from_marked_vertices(triangle(), {0}, 1, 1), 3U);
  EXPECT_EQ(sdce_from_marked_vertices(two_triangles(), {0, 4}, 2, 1), 6U);
  const WeightedGraph iso = graph(4, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  EXPECT_EQ(sdce_from_marked_vertices(iso, {3}, 1, 1), std::nullopt);
  // Adjacent marked vertices are separated by a split vertex.
  EXPECT_EQ(sdce_from_marked_vertices(triangle(), {0, 1}, 1, 1), 3U);
}

TEST(Sdc, Reconstruction) {
  const MarkedInstance two{two_triangles(), {0, 3}};
  const auto r2 = reconstruct_cycles(two, 2, 6, 3);
  ASSERT_TRUE(r2.unique);
  EXPECT_EQ(std::set<std::size_t>(r2.edges.begin(), r2.edges.end()), (std::set<std::size_t>{0, 1, 2, 3, 4, 5}));

  const auto r1 = reconstruct_cycles(MarkedInstance{triangle(), {0}}, 1, 3, 3);
  ASSERT_TRUE(r1.unique);
  EXPECT_EQ(std::set<std::size_t>(r1.edges.begin(), r1.edges.end()), (std::set<std::size_t>{0, 1, 2}));

  // The 4-cycle 0-1-2-3 beats the 5-cycle through 4.
  const WeightedGraph g = graph(5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}, {2, 4, 1}, {4, 3, 2}, {1, 4, 3}});
  const MarkedInstance inst{g, {0}};
  const auto r = reconstruct_cycles(inst, 1, 4, 3);
  ASSERT_TRUE(r.unique);
  EXPECT_EQ(std::set<std::size_t>(r.edges.begin(), r.edges.end()), (std::set<std::size_t>{0, 1, 2, 3}));
}

TEST(Sdc, VerifyCyclesRejects) {
  const MarkedInstance two{two_triangles(), {0, 3}};
  EXPECT_TRUE(verify_cycles(two, {0, 1, 2, 3, 4, 5}, 2, 6));
  EXPECT_FALSE(verify_cycles(two, {0, 1, 2, 3, 4, 5}, 1, 6));
  EXPECT_FALSE(verify_cycles(two, {0, 1, 2, 3, 4, 5}, 2, 7));
  EXPECT_FALSE(verify_cycles(two, {0, 1, 2}, 1, 3));
  EXPECT_FALSE(verify_cycles(two, {0, 1, 2, 3, 4, 5, 6}, 2, 7));
}

TEST(Sdc, Limits) {
  EXPECT_THROW(f1(MarkedInstance{triangle(), {}}), Error);
  EXPECT_THROW(f1(MarkedInstance{triangle(), {0, 0}}), Error);
  EXPECT_THROW(f1(MarkedInstance{triangle(), {5}}), Error);
  WeightedGraph big(20);
  for (std::size_t i = 0; i < 19; ++i) big.add_edge(i, i + 1, 1);
  EXPECT_THROW(f1(MarkedInstance{big, {0, 1, 2, 3, 4, 5, 6, 7, 8}}), Error);
}

TEST(Sdc, RandomAgainstEnumeration) {
  std::mt19937_64 rng(51);
  for (int it = 0; it < 12; ++it) {
    const WeightedGraph g = random_connected(rng, 4 + rng() % 3, 0.5, 3);
    const std::size_t l = 1 + it % 2;
    std::set<std::size_t> marked;
    while (marked.size() < l) marked.insert(rng() % g.m());
    const MarkedInstance inst{g, {marked.begin(), marked.end()}};
    const auto want = brute_disjoint_cycles(inst, l).min_len3;
    const auto got = l == 1 ? shortest_cycle_through_edges(inst, rng()) : shortest_two_disjoint_cycles(inst, rng());
    EXPECT_EQ(got, want);
  }
}

TEST(Sdc, DegreeTwoMarkedVerticesGiveOneInstance) {
  const WeightedGraph g = permod::test::graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}, {0, 2, 2}});
  const Sdp2Graph h = sdp2_graph(g, 0, 1, 2, 3);
  EXPECT_EQ(marked_vertex_instances(h.graph, {h.u1, h.u2}).size(), 1U);
  // Vertex 0 has degree 3, so every choice stays.
  EXPECT_EQ(marked_vertex_instances(g, {0}).size(), 3U);
}
