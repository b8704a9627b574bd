#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "cbc/clustering.h"
#include "test_support.h"

namespace cbc {
namespace {

TEST(Clustering, AddSortsAndDedups) {
  Clustering c(5);
  c.add({3, 1, 3, 0});
  EXPECT_EQ(c[0].members, (std::vector<NodeId>{0, 1, 3}));
  EXPECT_TRUE(c[0].contains(3));
  EXPECT_FALSE(c[0].contains(2));
  EXPECT_THROW(c.add({5}), std::out_of_range);
}

TEST(Clustering, MembershipsAndOrphans) {
  const Clustering c(5, {{0, 1}, {1, 2}});
  const auto m = c.memberships();
  EXPECT_EQ(m[1], (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(m[3].empty());
  EXPECT_EQ(c.orphans(), (std::vector<NodeId>{3, 4}));
  EXPECT_EQ(c.orphan_count(), 2u);
}

TEST(ClusterFile, WritesOrphanTrailerOnlyWhenNeeded) {
  const Graph g = testing::path_graph(4);
  std::ostringstream full, partial;
  write_clustering(full, g, Clustering(4, {{0, 1}, {2, 3}}));
  EXPECT_EQ(full.str(), "0 1\n2 3\n");
  write_clustering(partial, g, Clustering(4, {{0, 1}}));
  EXPECT_EQ(partial.str(), "0 1\n# orphans: 2 3\n");
}

TEST(ClusterFile, RoundTripKeepsOverlapsAndOrder) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = testing::random_graph(25, 0.1, rng);
    const Clustering c = testing::random_clustering(25, 4, 0.3, rng);
    std::ostringstream out;
    write_clustering(out, g, c);
    std::istringstream in(out.str());
    EXPECT_EQ(read_clustering(in, g), c);
  }
}

TEST(ClusterFile, UnknownLabelThrows) {
  const Graph g = testing::path_graph(3);
  std::istringstream in("0 1\n9\n");
  try {
    read_clustering(in, g);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ClusterFile, ReadWithNodesAddsIsolatedLabels) {
  const Graph g = testing::path_graph(3);
  std::istringstream in("0 1 2\nloner\n# orphans: ghost\n");
  const auto both = read_clustering_with_nodes(in, g);
  EXPECT_EQ(both.graph.num_nodes(), 5u);
  EXPECT_EQ(both.graph.num_edges(), 2u);
  ASSERT_EQ(both.clustering.size(), 2u);
  EXPECT_EQ(both.clustering.num_nodes(), 5u);
  EXPECT_EQ(both.clustering.orphans(), (std::vector<NodeId>{*both.graph.find("ghost")}));
}

}  // namespace
}  // namespace cbc
