#ifndef CBC_FWGEN_H_
#define CBC_FWGEN_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbc/clustering.h"
#include "cbc/graph.h"

namespace cbc {

// Planted-partition generator parameters. Exactly one of `edges` and
// `density` (fraction of the complete graph) must be set.
struct GenParams {
  std::size_t n_nodes = 0;
  std::optional<std::size_t> edges;
  std::optional<double> density;
  std::size_t n_clusters = 1;
  // Cluster i (1-based) gets a share proportional to i^-skew.
  double skew = 0.0;
  // Fraction of the edges placed inside clusters, in (0.5, 1].
  double assortativity = 1.0;
  std::uint64_t seed = 1;

  // Resolved edge count; throws std::invalid_argument on bad parameters.
  std::size_t edge_count() const;
};

class InfeasibleParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GeneratedGraph {
  Graph graph;  // node labels "0" .. "n-1" in id order
  Clustering truth;
  std::size_t intra_edges = 0;
};

// Cluster sizes for the skew model; sums to n, non-increasing.
std::vector<std::size_t> planted_cluster_sizes(std::size_t n, std::size_t k,
                                               double skew);

// Number of intra-cluster edges: ceil(assortativity * m).
std::size_t intra_edge_quota(std::size_t m, double assortativity);

// Deterministic for a fixed seed. Throws InfeasibleParams when a cluster
// cannot host its share of intra edges or the inter budget does not fit.
GeneratedGraph generate(const GenParams& params);

struct PlantedPair {
  Graph graph;
  Clustering truth;
};

// Writes `prefix`.edges (edge list) and `prefix`.truth (cluster file).
void write_pair(const Graph& g, const Clustering& truth, const std::string& prefix);

// Reads a pair written by write_pair; nodes only named in the truth file
// (isolated in the graph) are restored.
PlantedPair read_pair(const std::string& prefix);

}  // namespace cbc

#endif  // CBC_FWGEN_H_
