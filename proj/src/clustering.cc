#include "cbc/clustering.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace cbc {

bool Cluster::contains(NodeId v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

Clustering::Clustering(std::size_t num_nodes,
                       std::vector<std::vector<NodeId>> clusters)
    : num_nodes_(num_nodes) {
  for (auto& members : clusters) add(std::move(members));
}

void Clustering::add(std::vector<NodeId> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (!members.empty() && members.back() >= num_nodes_) {
    throw std::out_of_range("cluster member " + std::to_string(members.back()) +
                            " exceeds node count " + std::to_string(num_nodes_));
  }
  clusters_.push_back(Cluster{std::move(members), false});
}

void Clustering::erase(std::size_t index) {
  clusters_.erase(clusters_.begin() + static_cast<std::ptrdiff_t>(index));
}

std::vector<std::vector<std::size_t>> Clustering::memberships() const {
  std::vector<std::vector<std::size_t>> out(num_nodes_);
  for (std::size_t i = 0; i < clusters_.size(); ++i) {
    for (NodeId v : clusters_[i].members) out[v].push_back(i);
  }
  return out;
}

std::vector<NodeId> Clustering::orphans() const {
  std::vector<char> covered(num_nodes_, 0);
  for (const Cluster& c : clusters_) {
    for (NodeId v : c.members) covered[v] = 1;
  }
  std::vector<NodeId> out;
  for (NodeId v = 0; v < num_nodes_; ++v) {
    if (!covered[v]) out.push_back(v);
  }
  return out;
}

std::size_t Clustering::orphan_count() const { return orphans().size(); }

bool Clustering::operator==(const Clustering& other) const {
  if (num_nodes_ != other.num_nodes_ || clusters_.size() != other.clusters_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < clusters_.size(); ++i) {
    if (clusters_[i].members != other.clusters_[i].members) return false;
  }
  return true;
}

void write_clustering(std::ostream& out, const Graph& g, const Clustering& c) {
  for (const Cluster& cluster : c.clusters()) {
    for (std::size_t i = 0; i < cluster.members.size(); ++i) {
      if (i > 0) out << ' ';
      out << g.label(cluster.members[i]);
    }
    out << '\n';
  }
  const auto orphans = c.orphans();
  if (!orphans.empty()) {
    out << "# orphans:";
    for (NodeId v : orphans) out << ' ' << g.label(v);
    out << '\n';
  }
}

namespace {

// Parses cluster lines, resolving labels through `resolve`. The orphan
// trailer only has to name known nodes; orphans are implied by coverage.
template <typename Resolve>
std::vector<std::vector<NodeId>> parse_clusters(std::istream& in,
                                                Resolve&& resolve) {
  static constexpr std::string_view kOrphanTag = "# orphans:";
  std::vector<std::vector<NodeId>> clusters;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    bool orphan_line = false;
    if (body.starts_with(kOrphanTag)) {
      body.remove_prefix(kOrphanTag.size());
      orphan_line = true;
    } else if (body.starts_with('#')) {
      continue;
    }
    std::istringstream tokens{std::string(body)};
    std::vector<NodeId> members;
    std::string token;
    while (tokens >> token) members.push_back(resolve(token, line_no));
    if (orphan_line || members.empty()) continue;
    clusters.push_back(std::move(members));
  }
  return clusters;
}

}  // namespace

Clustering read_clustering(std::istream& in, const Graph& g) {
  auto clusters = parse_clusters(in, [&](const std::string& label, std::size_t line) {
    const auto id = g.find(label);
    if (!id) throw ParseError("unknown node label '" + label + "'", line);
    return *id;
  });
  return Clustering(g.num_nodes(), std::move(clusters));
}

GraphWithClustering read_clustering_with_nodes(std::istream& in, const Graph& g) {
  GraphBuilder builder;
  for (NodeId v = 0; v < g.num_nodes(); ++v) builder.add_node(g.label(v));
  for (const Edge& e : g.edges()) builder.add_edge(e.u, e.v);
  auto clusters = parse_clusters(in, [&](const std::string& label, std::size_t) {
    return builder.add_node(label);
  });
  GraphWithClustering out;
  out.graph = std::move(builder).build();
  out.clustering = Clustering(out.graph.num_nodes(), std::move(clusters));
  return out;
}

Clustering read_clustering_file(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_clustering(in, g);
}

void write_clustering_file(const std::string& path, const Graph& g,
                           const Clustering& c) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_clustering(out, g, c);
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace cbc
