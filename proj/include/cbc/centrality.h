#ifndef CBC_CENTRALITY_H_
#define CBC_CENTRALITY_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cbc/graph.h"

namespace cbc {

// Vertex betweenness over unordered pairs {s, t} with s != v != t. Nodes
// outside the analysed subgraph may carry +infinity (see lift_scores).
using CentralityScores = std::vector<double>;

// Exact betweenness (Brandes accumulation, one BFS per source). Sources are
// split into fixed blocks whose partial sums are added in block order, so
// the result is bit-identical for any `threads` value. 0 means all cores.
CentralityScores betweenness(const Graph& g, unsigned threads = 0);

inline constexpr std::size_t kBruteForceNodeLimit = 200;

class SizeLimitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Reference implementation: all-pairs distances and path counts, then for
// every pair and every interior node the share sigma_sv * sigma_vt / sigma_st.
// O(n^3); throws SizeLimitError above `max_nodes`.
CentralityScores brute_force_betweenness(
    const Graph& g, std::size_t max_nodes = kBruteForceNodeLimit);

struct Tail {
  // Core node the tail hangs from, or nullopt for a tree component.
  std::optional<NodeId> attachment;
  std::vector<NodeId> nodes;  // sorted
};

struct TailDecomposition {
  std::vector<char> in_core;  // per node of the analysed graph
  std::vector<NodeId> core;   // sorted
  std::vector<Tail> tails;    // ordered by smallest node
};

// Peels degree <= 1 nodes until none remain; what survives is the 2-core.
// Each connected group of peeled nodes is one tail.
TailDecomposition find_tails(const Graph& g);

struct StrippedGraph {
  Graph graph;
  // Node i of `graph` is node to_parent[i] of the input.
  std::vector<NodeId> to_parent;
  // Set when the core was empty and the input was returned unchanged.
  bool skipped = false;
};

// Subgraph induced by the core of `t`. Throws std::invalid_argument when `t`
// was not computed on `g`.
StrippedGraph strip_tails(const Graph& g, const TailDecomposition& t);

// Maps scores computed on a stripped graph back onto its parent; nodes that
// were stripped get +infinity so they sort after every real score.
CentralityScores lift_scores(const StrippedGraph& stripped,
                             const CentralityScores& scores,
                             std::size_t parent_nodes);

}  // namespace cbc

#endif  // CBC_CENTRALITY_H_
