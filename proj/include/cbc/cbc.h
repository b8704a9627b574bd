#ifndef CBC_CBC_H_
#define CBC_CBC_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cbc/centrality.h"
#include "cbc/clustering.h"
#include "cbc/graph.h"

namespace cbc {

struct CbcParams {
  // Community factor: a cluster is accepted when d_out / d_in < s.
  double s = 1.0;
  // Largest admissible cluster, as a fraction of the node count.
  double max_cluster_frac = 0.5;
  std::size_t min_cluster_size = 5;
  // Adopt orphans into the cluster holding most of their links.
  bool minimize_orphans = false;
  // Require every member to have more links inside its cluster than outside.
  bool flake_strict = false;
  // Upper bound on clique-seeding rounds (length of the size schedule).
  std::size_t max_retries = 8;

  void validate() const;
};

// Clique size caps for successive seeding rounds:
// ceil(r), ceil(r/2), ceil(2r), ceil(r/3), ceil(3r), ... with r = sqrt(n).
std::vector<std::size_t> clique_size_schedule(std::size_t n,
                                              std::size_t max_retries = 8);

// Seeds new clusters from unassigned nodes in ascending centrality order.
// Each kernel takes its unassigned neighbours, then grows breadth-first over
// unassigned nodes (lowest centrality first within a layer) up to
// 2 * max_clique_size while it is no larger than max_clique_size. Seeds of one
// or two nodes are dropped. Nodes with infinite centrality are never used.
// A max_clique_size of 0 takes the head of clique_size_schedule over the
// nodes with finite centrality. Returns the number of clusters added.
std::size_t initiate_cliques(const Graph& g, const CentralityScores& cb,
                             Clustering& c, std::size_t max_clique_size);

// Places tree-like tails: single-node tails join the clusters holding their
// attachment node, larger all-orphan tails become clusters of their own and
// are folded into the cluster of their attachment node while the union stays
// within max_cluster_frac * n.
void handle_tails(const Graph& g, const TailDecomposition& t, Clustering& c,
                  const CbcParams& params);

// l x l edge counts between clusters. B(i, i) counts the internal edges of
// cluster i once; B(i, j) counts each edge with one endpoint in cluster i and
// the other in cluster j once, so an edge inside an overlap contributes to
// both the diagonal and the off-diagonal entries.
class BlockMatrix {
 public:
  BlockMatrix() = default;
  explicit BlockMatrix(std::size_t l) : l_(l), data_(l * l, 0) {}

  std::size_t size() const { return l_; }
  std::uint64_t operator()(std::size_t i, std::size_t j) const {
    return data_[i * l_ + j];
  }
  std::uint64_t& at(std::size_t i, std::size_t j) { return data_[i * l_ + j]; }
  std::uint64_t row_sum(std::size_t i) const;
  bool symmetric() const;
  void erase(std::size_t index);

 private:
  std::size_t l_ = 0;
  std::vector<std::uint64_t> data_;
};

BlockMatrix build_block_matrix(const Graph& g, const Clustering& c);

// Chooses the next merge. Pairs qualify when their union fits within
// max_cluster_frac * num_nodes, they share at least one edge and not both are
// correlated; the winner maximizes B(i, j) / max(B(k, k), 1) over both
// orientations k in {i, j}, ties going to the smaller union, then to the
// lower index pair. The `correlated` flags of `c` must be current.
std::optional<std::pair<std::size_t, std::size_t>> select_merge_pair(
    const BlockMatrix& b, const Clustering& c, const CbcParams& params,
    std::size_t num_nodes);

// One pass over the nodes in id order. In the default mode a member with no
// link into its cluster, or with strictly more links into some other
// cluster, moves to the cluster holding most of its links (or leaves when it
// has none); a member tied between its cluster and another moves when that
// lowers the sum of the two clusters' d_out / d_in. With flake_strict a member whose inside links do not outnumber
// its outside links is removed. Clusters left disconnected are split into
// their components, empty ones dropped. Returns the number of changes.
std::size_t reassign_nodes(const Graph& g, Clustering& c, const CbcParams& params);

// Drops every cluster contained in another; among equal sets the lowest
// index survives. Returns the number removed.
std::size_t manage_subsets(Clustering& c);

// Repeatedly moves each orphan with a link into some cluster into the cluster
// holding most of its links (lowest index on ties). Returns nodes adopted.
std::size_t add_orphans(const Graph& g, Clustering& c);

// Like add_orphans, but an orphan joins its best cluster only when that
// strictly lowers the cluster's d_out / d_in and the cluster stays within
// max_cluster_frac * n. Used when minimize_orphans is off.
std::size_t adopt_improving_orphans(const Graph& g, Clustering& c,
                                   const CbcParams& params);

struct PhaseTimes {
  double centrality_ms = 0.0;
  double clique_init_ms = 0.0;
  double merging_ms = 0.0;
  double reassignment_ms = 0.0;
  double clustering_ms() const {
    return clique_init_ms + merging_ms + reassignment_ms;
  }
};

struct MergeStats {
  std::size_t merges = 0;
  std::size_t deletions = 0;
  std::size_t adopted = 0;
  std::size_t iterations = 0;
};

// Alternates reassignment and best-pair merging; once nothing merges, removes
// subsets and deletes the worst non-conforming cluster, repeating until every
// cluster conforms. Then orphans are adopted (add_orphans with
// minimize_orphans, adopt_improving_orphans otherwise) and the loop resumes
// while anything was adopted.
MergeStats merge_loop(const Graph& g, Clustering& c, const CbcParams& params,
                      PhaseTimes* times = nullptr);

// Community predicate and size bounds for one cluster.
bool cluster_conforms(const Graph& g, const Cluster& cluster,
                      const CbcParams& params);

struct CbcResult {
  Clustering clustering;
  // Every cluster satisfies the predicate and size bounds, the clustering is
  // non-empty and, with minimize_orphans, no orphan can be adopted.
  bool conforming = false;
  std::size_t rounds = 0;
  std::size_t initial_cliques = 0;
  MergeStats merge_stats;
  bool tails_skipped = false;
  PhaseTimes times;
};

// Full pipeline: strip tails, compute centrality on the core, then seed /
// place tails / merge for each clique size of the schedule until the result
// conforms. When no round conforms the best-scoring round is returned.
CbcResult cbc_cluster(const Graph& g, const CbcParams& params,
                      unsigned threads = 0);

}  // namespace cbc

#endif  // CBC_CBC_H_
