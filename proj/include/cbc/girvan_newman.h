#ifndef CBC_GIRVAN_NEWMAN_H_
#define CBC_GIRVAN_NEWMAN_H_

#include <cstddef>
#include <vector>

#include "cbc/clustering.h"
#include "cbc/graph.h"

namespace cbc {

// Shortest-path betweenness per edge over unordered node pairs, with
// fractional shares when several shortest paths exist.
struct EdgeCentralityScores {
  std::vector<Edge> edges;    // Graph::edges() order
  std::vector<double> value;  // parallel to `edges`
};

EdgeCentralityScores edge_betweenness(const Graph& g);

// Direct pair-by-pair enumeration; for tests on small graphs only.
EdgeCentralityScores brute_force_edge_betweenness(const Graph& g);

inline constexpr std::size_t kGirvanNewmanNodeLimit = 2000;

// Removes the highest-betweenness edge (lowest (u, v) on ties) and
// recomputes betweenness inside the affected component, until the graph
// splits into at least k components. Components are returned as disjoint
// clusters ordered by smallest node. Throws std::invalid_argument when k is
// outside [1, n] or the graph exceeds `max_nodes`.
Clustering gn_cluster(const Graph& g, std::size_t k,
                      std::size_t max_nodes = kGirvanNewmanNodeLimit);

}  // namespace cbc

#endif  // CBC_GIRVAN_NEWMAN_H_
