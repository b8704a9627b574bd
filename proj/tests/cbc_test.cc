#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cbc/cbc.h"
#include "cbc/fwgen.h"
#include "cbc/metrics.h"
#include "test_support.h"

namespace cbc {
namespace {

using testing::as_set;
using testing::make_graph;

CbcParams params_with(std::size_t min_size, double max_frac = 0.5) {
  CbcParams p;
  p.min_cluster_size = min_size;
  p.max_cluster_frac = max_frac;
  return p;
}

TEST(Params, Validation) {
  CbcParams p;
  EXPECT_NO_THROW(p.validate());
  p.s = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = CbcParams{};
  p.max_cluster_frac = 1.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = CbcParams{};
  p.min_cluster_size = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Schedule, Examples) {
  EXPECT_EQ(clique_size_schedule(100, 8),
            (std::vector<std::size_t>{10, 5, 20, 4, 30, 3, 40, 2}));
  EXPECT_EQ(clique_size_schedule(100, 3), (std::vector<std::size_t>{10, 5, 20}));
  EXPECT_EQ(clique_size_schedule(4000, 1)[0], 64u);
  EXPECT_EQ(clique_size_schedule(1, 4), (std::vector<std::size_t>{1, 1, 2, 1}));
  EXPECT_THROW(clique_size_schedule(0), std::invalid_argument);
}

TEST(Schedule, MatchesFloatingPointCeilings) {
  for (std::size_t n : {2u, 3u, 17u, 99u, 101u, 955u, 8000u}) {
    const auto sched = clique_size_schedule(n, 9);
    const double r = std::sqrt(static_cast<double>(n));
    EXPECT_EQ(sched[0], static_cast<std::size_t>(std::ceil(r - 1e-9)));
    for (std::size_t k = 2, i = 1; i < sched.size(); ++k) {
      EXPECT_EQ(sched[i++], std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(r / k - 1e-9)))) << n;
      if (i < sched.size()) {
        EXPECT_EQ(sched[i++], static_cast<std::size_t>(std::ceil(r * k - 1e-9))) << n;
      }
    }
  }
}

TEST(InitiateCliques, TwoTriangles) {
  const Graph g = testing::two_triangles_bridge();
  const CentralityScores cb = betweenness(g);
  Clustering c(6);
  EXPECT_EQ(initiate_cliques(g, cb, c, 2), 2u);
  EXPECT_EQ(c, Clustering(6, {{0, 1, 2}, {3, 4, 5}}));

  // A larger cap lets the first kernel grow over the bridge.
  Clustering wide(6);
  EXPECT_EQ(initiate_cliques(g, cb, wide, 3), 1u);
  EXPECT_EQ(wide[0].size(), 6u);
}

TEST(InitiateCliques, SmallSeedsDropped) {
  const Graph path = testing::path_graph(3);
  Clustering c(3);
  EXPECT_EQ(initiate_cliques(path, betweenness(path), c, 0), 1u);
  EXPECT_EQ(c[0].members, (std::vector<NodeId>{0, 1, 2}));

  const Graph lone = make_graph(1, {});
  Clustering none(1);
  EXPECT_EQ(initiate_cliques(lone, betweenness(lone), none, 0), 0u);

  const Graph edge = make_graph(2, {{0, 1}});
  Clustering pair(2);
  EXPECT_EQ(initiate_cliques(edge, betweenness(edge), pair, 0), 0u);
}

TEST(InitiateCliques, SkipsAssignedAndInfiniteNodes) {
  const Graph g = testing::two_triangles_bridge();
  CentralityScores cb = betweenness(g);
  cb[5] = std::numeric_limits<double>::infinity();
  Clustering c(6, {{0, 1, 2}});
  EXPECT_EQ(initiate_cliques(g, cb, c, 2), 0u);
  EXPECT_EQ(c.size(), 1u);
  cb[5] = 0.0;
  EXPECT_EQ(initiate_cliques(g, cb, c, 2), 1u);
  EXPECT_EQ(c[1].members, (std::vector<NodeId>{3, 4, 5}));
  EXPECT_THROW(initiate_cliques(g, CentralityScores(3), c, 2), std::invalid_argument);
}

TEST(InitiateCliques, SeedsAreDisjoint) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = testing::random_graph(60, 0.08, rng);
    Clustering c(60);
    initiate_cliques(g, betweenness(g), c, 0);
    EXPECT_EQ(drate(c).defined ? drate(c).value : 1.0, 1.0);
    for (const Cluster& cl : c.clusters()) EXPECT_GE(cl.size(), 3u);
  }
}

TEST(HandleTails, SinglePendantJoinsAttachmentCluster) {
  const Graph g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {3, 4}});
  Clustering c(5, {{0, 1, 2, 3}});
  handle_tails(g, find_tails(g), c, params_with(3));
  EXPECT_EQ(c, Clustering(5, {{0, 1, 2, 3, 4}}));
}

TEST(HandleTails, LongTailMergesOnlyWithinSizeLimit) {
  const Graph g = make_graph(7, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {3, 4}, {4, 5}, {5, 6}});
  const TailDecomposition t = find_tails(g);
  Clustering roomy(7, {{0, 1, 2, 3}});
  handle_tails(g, t, roomy, params_with(3, 1.0));
  EXPECT_EQ(roomy, Clustering(7, {{0, 1, 2, 3, 4, 5, 6}}));

  Clustering tight(7, {{0, 1, 2, 3}});
  handle_tails(g, t, tight, params_with(3, 0.5));
  EXPECT_EQ(tight, Clustering(7, {{0, 1, 2, 3}, {4, 5, 6}}));
}

TEST(HandleTails, TailFreeGraphUnchanged) {
  const Graph g = testing::cycle_graph(5);
  Clustering c(5, {{0, 1, 2}});
  handle_tails(g, find_tails(g), c, CbcParams{});
  EXPECT_EQ(c, Clustering(5, {{0, 1, 2}}));
}

TEST(BlockMatrix, Examples) {
  const Graph g = testing::two_triangles_bridge();
  const BlockMatrix b = build_block_matrix(g, Clustering(6, {{0, 1, 2}, {3, 4, 5}}));
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b(0, 0), 3u);
  EXPECT_EQ(b(0, 1), 1u);
  EXPECT_EQ(b(1, 0), 1u);
  EXPECT_EQ(b(1, 1), 3u);

  const BlockMatrix whole = build_block_matrix(g, Clustering(6, {{0, 1, 2, 3, 4, 5}}));
  EXPECT_EQ(whole(0, 0), g.num_edges());
}

TEST(BlockMatrix, OverlapCountsSharedEdgesOnBothSides) {
  // Edge 0-1 lies in cluster 0 and, through node 1, also touches cluster 1.
  const Graph g = testing::path_graph(3);
  const BlockMatrix b = build_block_matrix(g, Clustering(3, {{0, 1}, {1, 2}}));
  EXPECT_EQ(b(0, 0), 1u);
  EXPECT_EQ(b(1, 1), 1u);
  EXPECT_EQ(b(0, 1), 2u);
}

TEST(BlockMatrix, SymmetricWithInternalDiagonal) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = testing::random_graph(30, 0.15, rng);
    const Clustering c = testing::random_clustering(30, 5, 0.25, rng);
    const BlockMatrix b = build_block_matrix(g, c);
    EXPECT_TRUE(b.symmetric());
    for (std::size_t i = 0; i < c.size(); ++i) {
      EXPECT_EQ(b(i, i), testing::oracle_cut(g, c[i].members).first);
    }
  }
}

TEST(BlockMatrix, EraseDropsRowAndColumn) {
  BlockMatrix b(3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) b.at(i, j) = 10 * i + j;
  }
  b.erase(1);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b(0, 1), 2u);
  EXPECT_EQ(b(1, 0), 20u);
  EXPECT_EQ(b(1, 1), 22u);
  EXPECT_EQ(b.row_sum(1), 42u);
}

void mark_correlated(const Graph& g, Clustering& c, double s) {
  for (Cluster& cl : c.clusters()) cl.correlated = is_community(g, cl.members, s);
}

TEST(SelectMergePair, CorrelatedPairIsNeverMerged) {
  const Graph g = testing::two_triangles_bridge();
  Clustering c(6, {{0, 1, 2}, {3, 4, 5}});
  mark_correlated(g, c, 1.0);
  EXPECT_FALSE(select_merge_pair(build_block_matrix(g, c), c, params_with(3, 1.0), 6));
  Clustering one(6, {{0, 1, 2, 3, 4, 5}});
  mark_correlated(g, one, 1.0);
  EXPECT_FALSE(select_merge_pair(build_block_matrix(g, one), one, params_with(3, 1.0), 6));
}

TEST(SelectMergePair, BridgedCliquesRespectSizeLimit) {
  std::vector<std::pair<NodeId, NodeId>> e{{0, 4}, {1, 5}, {2, 6}};
  for (NodeId base : {0u, 4u}) {
    for (NodeId u = base; u < base + 4; ++u) {
      for (NodeId v = u + 1; v < base + 4; ++v) e.emplace_back(u, v);
    }
  }
  const Graph g = make_graph(8, e);
  Clustering c(8, {{0, 1, 2, 3}, {4, 5, 6, 7}});
  mark_correlated(g, c, 1.0);
  EXPECT_TRUE(c[0].correlated && c[1].correlated);
  EXPECT_FALSE(select_merge_pair(build_block_matrix(g, c), c, params_with(3, 1.0), 8));
  c[1].correlated = false;
  const auto pair = select_merge_pair(build_block_matrix(g, c), c, params_with(3, 1.0), 8);
  ASSERT_TRUE(pair);
  EXPECT_EQ(*pair, (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_FALSE(select_merge_pair(build_block_matrix(g, c), c, params_with(3, 0.5), 8));
}

TEST(SelectMergePair, PrefersStrongestLinkThenSmallerUnion) {
  // Cluster 0 = {0, 1}; 1 = {2}; 2 = {3, 4, 5}. Node 2 links twice into
  // cluster 0 and once into cluster 2.
  const Graph g = make_graph(6, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 5}});
  Clustering c(6, {{0, 1}, {2}, {3, 4, 5}});
  const BlockMatrix b = build_block_matrix(g, c);
  const auto pair = select_merge_pair(b, c, params_with(1, 1.0), 6);
  ASSERT_TRUE(pair);
  EXPECT_EQ(*pair, (std::pair<std::size_t, std::size_t>{0, 1}));

  // Equal scores: {0,1}+{2} and {2}+{3} both share one edge over an empty
  // diagonal; the smaller union wins.
  const Graph h = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  Clustering d(5, {{0, 1}, {2}, {3}});
  const auto tie = select_merge_pair(build_block_matrix(h, d), d, params_with(1, 1.0), 5);
  ASSERT_TRUE(tie);
  EXPECT_EQ(*tie, (std::pair<std::size_t, std::size_t>{1, 2}));
}

TEST(ReassignNodes, MemberMovesToClusterHoldingMoreLinks) {
  const Graph g = testing::two_triangles_bridge();
  Clustering c(6, {{0, 1, 2, 3}, {4, 5}});
  EXPECT_EQ(reassign_nodes(g, c, CbcParams{}), 1u);
  EXPECT_EQ(c, Clustering(6, {{0, 1, 2}, {3, 4, 5}}));
  EXPECT_EQ(reassign_nodes(g, c, CbcParams{}), 0u);
}

TEST(ReassignNodes, TieMovesWhenRatiosImproveAndSplitsLeftover) {
  // Path 0-1-2-3-4 with the triangle 2-5-6 hanging off node 2.
  const Graph g = make_graph(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {2, 5}, {2, 6}, {5, 6}});
  Clustering c(7, {{0, 1, 2, 3, 4}, {5, 6}});
  EXPECT_EQ(reassign_nodes(g, c, CbcParams{}), 1u);
  EXPECT_EQ(as_set(c), as_set(Clustering(7, {{0, 1}, {2, 5, 6}, {3, 4}})));
}

TEST(ReassignNodes, MemberWithoutInsideLinksLeaves) {
  const Graph g = make_graph(4, {{0, 1}, {1, 2}, {2, 0}, {3, 0}});
  Clustering c(4, {{0, 1, 2}, {3}});
  // A singleton has no inside link but also nowhere better to go.
  Clustering lone(4, {{3}});
  EXPECT_EQ(reassign_nodes(g, lone, CbcParams{}), 1u);
  EXPECT_TRUE(lone.empty());
  EXPECT_EQ(reassign_nodes(g, c, CbcParams{}), 1u);
  EXPECT_EQ(c, Clustering(4, {{0, 1, 2, 3}}));
}

TEST(ReassignNodes, FlakeStrictRemovesWeakMembers) {
  const Graph g = testing::two_triangles_bridge();
  CbcParams strict;
  strict.flake_strict = true;
  Clustering good(6, {{0, 1, 2}, {3, 4, 5}});
  EXPECT_EQ(reassign_nodes(g, good, strict), 0u);
  Clustering weak(6, {{0, 1, 2, 3}});
  // Node 3 has one link inside and two outside.
  EXPECT_EQ(reassign_nodes(g, weak, strict), 1u);
  EXPECT_EQ(weak, Clustering(6, {{0, 1, 2}}));
}

TEST(ManageSubsets, DropsContainedAndDuplicateClusters) {
  Clustering c(5, {{0, 1}, {0, 1, 2}, {3}, {0, 1}, {3}});
  EXPECT_EQ(manage_subsets(c), 3u);
  EXPECT_EQ(c, Clustering(5, {{0, 1, 2}, {3}}));
  EXPECT_EQ(manage_subsets(c), 0u);
}

TEST(AddOrphans, PicksClusterWithMostLinks) {
  const Graph g = make_graph(5, {{0, 1}, {0, 2}, {0, 3}, {1, 2}});
  Clustering c(5, {{1, 2}, {3}});
  EXPECT_EQ(add_orphans(g, c), 1u);
  EXPECT_EQ(c, Clustering(5, {{0, 1, 2}, {3}}));
  EXPECT_EQ(c.orphans(), (std::vector<NodeId>{4}));
}

TEST(AddOrphans, ChainsThroughNewlyAdoptedNodes) {
  const Graph g = testing::path_graph(5);
  Clustering c(5, {{0, 1}});
  EXPECT_EQ(add_orphans(g, c), 3u);
  EXPECT_EQ(c, Clustering(5, {{0, 1, 2, 3, 4}}));
}

TEST(AddOrphans, LeavesNoAdoptableOrphan) {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = testing::random_graph(40, 0.05, rng);
    Clustering c = testing::random_clustering(40, 3, 0.1, rng);
    add_orphans(g, c);
    const auto m = c.memberships();
    for (NodeId x = 0; x < 40; ++x) {
      if (!m[x].empty()) continue;
      for (NodeId w : g.neighbors(x)) EXPECT_TRUE(m[w].empty());
    }
  }
}

TEST(AdoptImprovingOrphans, OnlyWhenRatioDrops) {
  const Graph g = testing::two_triangles_bridge();
  Clustering c(6, {{0, 1, 2}, {3, 4}});
  EXPECT_EQ(adopt_improving_orphans(g, c, params_with(3, 0.5)), 1u);
  EXPECT_EQ(c, Clustering(6, {{0, 1, 2}, {3, 4, 5}}));

  Clustering capped(6, {{0, 1, 2}, {3, 4}});
  EXPECT_EQ(adopt_improving_orphans(g, capped, params_with(3, 0.4)), 0u);

  // Triangle 0-1-2 with a hub 3 whose other links go to orphans: taking the
  // hub would raise the triangle's ratio from 1/3 to 3/4.
  const Graph hub = make_graph(7, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {3, 4}, {3, 5}, {3, 6}});
  Clustering tri(7, {{0, 1, 2}});
  EXPECT_EQ(adopt_improving_orphans(hub, tri, params_with(3, 1.0)), 0u);
  EXPECT_EQ(add_orphans(hub, tri), 4u);
}

TEST(MergeLoop, RecoversTwoTrianglesFromFragments) {
  const Graph g = testing::two_triangles_bridge();
  Clustering c(6, {{0, 1}, {2, 3}, {4, 5}});
  merge_loop(g, c, params_with(3));
  EXPECT_EQ(as_set(c), as_set(Clustering(6, {{0, 1, 2}, {3, 4, 5}})));

  Clustering settled(6, {{0, 1, 2}, {3, 4, 5}});
  const MergeStats stats = merge_loop(g, settled, params_with(3));
  EXPECT_EQ(stats.merges, 0u);
  EXPECT_EQ(stats.deletions, 0u);
}

TEST(MergeLoop, DeletesClustersThatCannotConform) {
  // A single triangle under a minimum size of 4 can only be deleted.
  const Graph g = testing::two_triangles_bridge();
  Clustering c(6, {{0, 1, 2}, {3, 4, 5}});
  const MergeStats stats = merge_loop(g, c, params_with(4));
  EXPECT_TRUE(c.empty());
  EXPECT_EQ(stats.deletions, 2u);
}

TEST(CbcCluster, TwoTriangles) {
  const Graph g = testing::two_triangles_bridge();
  const CbcResult r = cbc_cluster(g, params_with(3));
  EXPECT_TRUE(r.conforming);
  EXPECT_EQ(as_set(r.clustering), as_set(Clustering(6, {{0, 1, 2}, {3, 4, 5}})));
  EXPECT_NEAR(q_c(g, r.clustering), 1.0 / 3.0, 1e-12);
}

TEST(CbcCluster, EmptyGraphAndBadParamsThrow) {
  EXPECT_THROW(cbc_cluster(Graph{}, CbcParams{}), std::invalid_argument);
  CbcParams bad;
  bad.s = -1.0;
  EXPECT_THROW(cbc_cluster(testing::path_graph(3), bad), std::invalid_argument);
}

TEST(CbcCluster, ForestIsClusteredWithoutTailStripping) {
  const Graph tree = testing::path_graph(12);
  const CbcResult r = cbc_cluster(tree, params_with(3));
  EXPECT_TRUE(r.tails_skipped);
  for (const Cluster& cl : r.clustering.clusters()) {
    EXPECT_EQ(connected_components(tree.induced_subgraph(cl.members)).size(), 1u);
  }
}

GeneratedGraph planted(std::size_t n, std::size_t m, std::size_t k, double a,
                       std::uint64_t seed) {
  GenParams p;
  p.n_nodes = n;
  p.edges = m;
  p.n_clusters = k;
  p.assortativity = a;
  p.seed = seed;
  p.skew = 0.1;
  return generate(p);
}

TEST(CbcCluster, ExactRecoveryOfDisconnectedClusters) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const GeneratedGraph gen = planted(300, 2400, 6, 1.0, seed);
    const CbcResult r = cbc_cluster(gen.graph, CbcParams{});
    EXPECT_TRUE(r.conforming);
    EXPECT_EQ(as_set(r.clustering), as_set(gen.truth)) << seed;
  }
}

TEST(CbcCluster, DeterministicAcrossThreadCounts) {
  const GeneratedGraph gen = planted(400, 3000, 5, 0.85, 8);
  const CbcResult a = cbc_cluster(gen.graph, CbcParams{}, 1);
  const CbcResult b = cbc_cluster(gen.graph, CbcParams{}, 4);
  EXPECT_EQ(a.clustering, b.clustering);
  EXPECT_EQ(a.clustering, cbc_cluster(gen.graph, CbcParams{}, 1).clustering);
}

class PlantedProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(PlantedProperties, ConformingOutputInvariants) {
  const GeneratedGraph gen = planted(500, 4000, 5, 0.8, GetParam());
  for (bool minimize : {false, true}) {
    CbcParams p;
    p.minimize_orphans = minimize;
    const CbcResult r = cbc_cluster(gen.graph, p);
    ASSERT_TRUE(r.conforming) << minimize;
    const Clustering& c = r.clustering;
    ASSERT_FALSE(c.empty());
    for (std::size_t i = 0; i < c.size(); ++i) {
      EXPECT_TRUE(is_community(gen.graph, c[i].members, p.s));
      EXPECT_GE(c[i].size(), p.min_cluster_size);
      EXPECT_LE(static_cast<double>(c[i].size()), p.max_cluster_frac * 500);
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (i == j) continue;
        EXPECT_FALSE(std::includes(c[j].members.begin(), c[j].members.end(),
                                   c[i].members.begin(), c[i].members.end()));
      }
    }
    if (r.rounds == 1) {
      EXPECT_LE(r.merge_stats.merges, r.initial_cliques);
    }
    if (minimize) {
      const auto m = c.memberships();
      for (NodeId x = 0; x < 500; ++x) {
        if (!m[x].empty()) continue;
        for (NodeId w : gen.graph.neighbors(x)) EXPECT_TRUE(m[w].empty());
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, PlantedProperties, ::testing::Values(1, 2, 3, 4));

}  // namespace
}  // namespace cbc
