#ifndef CBC_GRAPH_H_
#define CBC_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cbc {

// Dense internal node index in [0, n).
using NodeId = std::uint32_t;

struct Edge {
  NodeId u;
  NodeId v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " +
                                           what),
        line_(line) {}
  // 1-based line number, 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Undirected, unweighted simple graph in CSR form. Immutable once built.
class Graph {
 public:
  Graph() = default;

  std::size_t num_nodes() const { return labels_.size(); }
  std::size_t num_edges() const { return neighbors_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool contains(NodeId v) const { return v < num_nodes(); }
  bool has_edge(NodeId u, NodeId v) const;

  const std::string& label(NodeId v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<NodeId> find(std::string_view label) const;

  // Every edge once, with u < v, in ascending (u, v) order.
  std::vector<Edge> edges() const;

  // Subgraph induced by `nodes` (any order, no duplicates). Node i of the
  // result corresponds to nodes[i] and keeps its label.
  Graph induced_subgraph(std::span<const NodeId> nodes) const;

  // Same labels and the same edge set in label space; internal ids may differ.
  bool same_structure(const Graph& other) const;

 private:
  friend class GraphBuilder;

  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
};

struct BuildStats {
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
  std::size_t dropped() const { return self_loops + duplicates; }
};

// Accumulates labelled nodes and edges; reversed and repeated edges collapse
// onto one undirected edge and self-loops are discarded.
class GraphBuilder {
 public:
  NodeId add_node(std::string_view label);
  void add_edge(NodeId u, NodeId v);
  void add_edge(std::string_view a, std::string_view b) {
    const NodeId u = add_node(a);
    add_edge(u, add_node(b));
  }
  std::size_t num_nodes() const { return labels_.size(); }

  Graph build(BuildStats* stats = nullptr) &&;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<Edge> edges_;
  std::size_t self_loops_ = 0;
};

struct LoadResult {
  Graph graph;
  BuildStats stats;
};

// One edge per line as two whitespace-separated labels; '#' starts a comment
// line. Throws ParseError on malformed lines or when no node is found.
LoadResult load_edge_list(std::istream& in);

// Pajek .net: "*Vertices n" (optionally followed by `index "label"` lines),
// then "*Edges"/"*Arcs" pairs or "*Edgeslist"/"*Arcslist" rows, 1-based.
LoadResult load_pajek_net(std::istream& in);

enum class GraphFormat { kEdgeList, kPajek };

LoadResult load_graph_file(const std::string& path, GraphFormat format);

// Writes every edge once as "label label", in Graph::edges() order.
void write_edge_list(std::ostream& out, const Graph& g);

struct DegreeSplit {
  std::size_t d_in = 0;
  std::size_t d_out = 0;
  friend bool operator==(const DegreeSplit&, const DegreeSplit&) = default;
};

// Links of node i into `members` (excluding i itself) and out of it.
DegreeSplit node_degree_split(const Graph& g, NodeId i,
                              std::span<const NodeId> members);

struct CutSizes {
  std::size_t d_in = 0;   // edges with both endpoints inside, counted once
  std::size_t d_out = 0;  // edges with exactly one endpoint inside
  friend bool operator==(const CutSizes&, const CutSizes&) = default;
};

CutSizes cluster_cut_sizes(const Graph& g, std::span<const NodeId> members);

// Connected components as sorted node lists, ordered by smallest member.
std::vector<std::vector<NodeId>> connected_components(const Graph& g);

}  // namespace cbc

#endif  // CBC_GRAPH_H_
