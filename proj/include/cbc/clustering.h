#ifndef CBC_CLUSTERING_H_
#define CBC_CLUSTERING_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "cbc/graph.h"

namespace cbc {

// A community candidate. Members are kept sorted and unique.
struct Cluster {
  std::vector<NodeId> members;
  // Cached "satisfies the community predicate" flag; only meaningful while a
  // clustering is being built.
  bool correlated = false;

  std::size_t size() const { return members.size(); }
  bool contains(NodeId v) const;
};

// Ordered, possibly overlapping clusters over nodes [0, num_nodes). Nodes in
// no cluster are orphans.
class Clustering {
 public:
  Clustering() = default;
  explicit Clustering(std::size_t num_nodes) : num_nodes_(num_nodes) {}
  Clustering(std::size_t num_nodes, std::vector<std::vector<NodeId>> clusters);

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t size() const { return clusters_.size(); }
  bool empty() const { return clusters_.empty(); }

  const Cluster& operator[](std::size_t i) const { return clusters_[i]; }
  Cluster& operator[](std::size_t i) { return clusters_[i]; }
  const std::vector<Cluster>& clusters() const { return clusters_; }
  std::vector<Cluster>& clusters() { return clusters_; }

  // Sorts and dedups `members`; throws std::out_of_range on unknown nodes.
  void add(std::vector<NodeId> members);
  void erase(std::size_t index);

  // For every node, the indices of the clusters holding it (ascending).
  std::vector<std::vector<std::size_t>> memberships() const;
  std::vector<NodeId> orphans() const;
  std::size_t orphan_count() const;

  // Same cluster sets in the same order.
  bool operator==(const Clustering& other) const;

 private:
  std::size_t num_nodes_ = 0;
  std::vector<Cluster> clusters_;
};

// One cluster per line as whitespace-separated labels, followed by a
// "# orphans: ..." line when orphans exist.
void write_clustering(std::ostream& out, const Graph& g, const Clustering& c);

// Reads the format above against the labels of `g`; unknown labels throw
// ParseError.
Clustering read_clustering(std::istream& in, const Graph& g);

// Reads a cluster file whose labels may name nodes the graph does not have
// (isolated nodes absent from an edge list). Returns the graph extended with
// those nodes and the clustering over it.
struct GraphWithClustering {
  Graph graph;
  Clustering clustering;
};
GraphWithClustering read_clustering_with_nodes(std::istream& in, const Graph& g);

Clustering read_clustering_file(const std::string& path, const Graph& g);
void write_clustering_file(const std::string& path, const Graph& g,
                           const Clustering& c);

}  // namespace cbc

#endif  // CBC_CLUSTERING_H_
