#include "cbc/girvan_newman.h"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace cbc {
namespace {

struct Arc {
  NodeId to;
  std::size_t edge;
};

// Adjacency with edge ids and removable edges.
class EdgeGraph {
 public:
  explicit EdgeGraph(const Graph& g) : edges_(g.edges()), adj_(g.num_nodes()) {
    active_.assign(edges_.size(), 1);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      adj_[edges_[e].u].push_back({edges_[e].v, e});
      adj_[edges_[e].v].push_back({edges_[e].u, e});
    }
    dist_.assign(g.num_nodes(), -1);
    sigma_.assign(g.num_nodes(), 0.0);
    delta_.assign(g.num_nodes(), 0.0);
  }

  std::size_t num_nodes() const { return adj_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool active(std::size_t e) const { return active_[e]; }
  void remove(std::size_t e) { active_[e] = 0; }

  // Nodes reachable from s over active edges, in BFS order.
  std::vector<NodeId> component(NodeId s) const {
    std::vector<NodeId> out{s};
    std::vector<char> seen(adj_.size(), 0);
    seen[s] = 1;
    for (std::size_t head = 0; head < out.size(); ++head) {
      for (const Arc& a : adj_[out[head]]) {
        if (active_[a.edge] && !seen[a.to]) {
          seen[a.to] = 1;
          out.push_back(a.to);
        }
      }
    }
    return out;
  }

  // Adds half of source s's edge dependencies into `scores`.
  void accumulate(NodeId s, std::vector<double>& scores) {
    order_.clear();
    dist_[s] = 0;
    sigma_[s] = 1.0;
    order_.push_back(s);
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const NodeId v = order_[head];
      for (const Arc& a : adj_[v]) {
        if (!active_[a.edge]) continue;
        if (dist_[a.to] < 0) {
          dist_[a.to] = dist_[v] + 1;
          order_.push_back(a.to);
        }
        if (dist_[a.to] == dist_[v] + 1) sigma_[a.to] += sigma_[v];
      }
    }
    for (std::size_t k = order_.size(); k-- > 0;) {
      const NodeId w = order_[k];
      for (const Arc& a : adj_[w]) {
        if (!active_[a.edge] || dist_[a.to] != dist_[w] - 1) continue;
        const double share = sigma_[a.to] / sigma_[w] * (1.0 + delta_[w]);
        scores[a.edge] += 0.5 * share;
        delta_[a.to] += share;
      }
    }
    for (NodeId v : order_) {
      dist_[v] = -1;
      sigma_[v] = 0.0;
      delta_[v] = 0.0;
    }
  }

  void recompute(const std::vector<NodeId>& nodes, std::vector<double>& scores) {
    for (NodeId v : nodes) {
      for (const Arc& a : adj_[v]) scores[a.edge] = 0.0;
    }
    for (NodeId s : nodes) accumulate(s, scores);
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Arc>> adj_;
  std::vector<char> active_;
  std::vector<std::int64_t> dist_;
  std::vector<double> sigma_;
  std::vector<double> delta_;
  std::vector<NodeId> order_;
};

}  // namespace

EdgeCentralityScores edge_betweenness(const Graph& g) {
  EdgeGraph eg(g);
  EdgeCentralityScores out;
  out.edges = eg.edges();
  out.value.assign(out.edges.size(), 0.0);
  for (NodeId s = 0; s < g.num_nodes(); ++s) eg.accumulate(s, out.value);
  return out;
}

EdgeCentralityScores brute_force_edge_betweenness(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  std::vector<std::vector<double>> paths(n, std::vector<double>(n, 0.0));
  for (NodeId s = 0; s < n; ++s) {
    std::vector<NodeId> queue{s};
    dist[s][s] = 0;
    paths[s][s] = 1.0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId v = queue[head];
      for (NodeId w : g.neighbors(v)) {
        if (dist[s][w] < 0) {
          dist[s][w] = dist[s][v] + 1;
          queue.push_back(w);
        }
        if (dist[s][w] == dist[s][v] + 1) paths[s][w] += paths[s][v];
      }
    }
  }
  EdgeCentralityScores out;
  out.edges = g.edges();
  out.value.assign(out.edges.size(), 0.0);
  for (NodeId s = 0; s < n; ++s) {
    for (NodeId t = s + 1; t < n; ++t) {
      if (dist[s][t] < 0) continue;
      for (std::size_t e = 0; e < out.edges.size(); ++e) {
        const auto [u, v] = out.edges[e];
        for (const auto& [a, b] : {std::pair{u, v}, std::pair{v, u}}) {
          if (dist[s][a] >= 0 && dist[b][t] >= 0 &&
              dist[s][a] + 1 + dist[b][t] == dist[s][t]) {
            out.value[e] += paths[s][a] * paths[b][t] / paths[s][t];
          }
        }
      }
    }
  }
  return out;
}

Clustering gn_cluster(const Graph& g, std::size_t k, std::size_t max_nodes) {
  const std::size_t n = g.num_nodes();
  if (k < 1 || k > n) {
    throw std::invalid_argument("k must be in [1, " + std::to_string(n) + "]");
  }
  if (n > max_nodes) {
    throw std::invalid_argument("Girvan-Newman is limited to " +
                                std::to_string(max_nodes) + " nodes");
  }
  EdgeGraph eg(g);
  std::vector<double> scores(eg.edges().size(), 0.0);
  for (NodeId s = 0; s < n; ++s) eg.accumulate(s, scores);
  std::size_t components = connected_components(g).size();
  std::size_t remaining = eg.edges().size();

  while (components < k && remaining > 0) {
    std::size_t top = eg.edges().size();
    for (std::size_t e = 0; e < eg.edges().size(); ++e) {
      if (!eg.active(e)) continue;
      // Scores equal up to rounding count as ties; the lower edge wins.
      if (top == eg.edges().size() ||
          scores[e] > scores[top] + 1e-9 * std::max(1.0, scores[top])) {
        top = e;
      }
    }
    eg.remove(top);
    scores[top] = 0.0;
    --remaining;
    const auto [u, v] = eg.edges()[top];
    const auto side_u = eg.component(u);
    eg.recompute(side_u, scores);
    if (std::find(side_u.begin(), side_u.end(), v) == side_u.end()) {
      ++components;
      eg.recompute(eg.component(v), scores);
    }
  }

  std::vector<std::vector<NodeId>> parts;
  std::vector<char> placed(n, 0);
  for (NodeId s = 0; s < n; ++s) {
    if (placed[s]) continue;
    auto part = eg.component(s);
    for (NodeId v : part) placed[v] = 1;
    parts.push_back(std::move(part));
  }
  return Clustering(n, std::move(parts));
}

}  // namespace cbc
