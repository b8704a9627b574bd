#include "cbc/centrality.h"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <thread>

namespace cbc {
namespace {

constexpr std::size_t kSourceBlocks = 32;

// Scratch buffers reused across sources by one worker.
struct BrandesWorkspace {
  explicit BrandesWorkspace(std::size_t n)
      : dist(n, -1), sigma(n, 0.0), delta(n, 0.0) {
    order.reserve(n);
  }
  std::vector<std::int64_t> dist;
  std::vector<double> sigma;
  std::vector<double> delta;
  std::vector<NodeId> order;
};

// Adds source s's dependencies into `scores`, scaled by 1/2 because each
// unordered pair is reached from both of its endpoints.
void accumulate_source(const Graph& g, NodeId s, BrandesWorkspace& ws,
                       std::vector<double>& scores) {
  ws.order.clear();
  ws.dist[s] = 0;
  ws.sigma[s] = 1.0;
  ws.order.push_back(s);
  for (std::size_t head = 0; head < ws.order.size(); ++head) {
    const NodeId v = ws.order[head];
    for (NodeId w : g.neighbors(v)) {
      if (ws.dist[w] < 0) {
        ws.dist[w] = ws.dist[v] + 1;
        ws.order.push_back(w);
      }
      if (ws.dist[w] == ws.dist[v] + 1) ws.sigma[w] += ws.sigma[v];
    }
  }
  for (std::size_t k = ws.order.size(); k-- > 0;) {
    const NodeId w = ws.order[k];
    for (NodeId v : g.neighbors(w)) {
      if (ws.dist[v] == ws.dist[w] - 1) {
        ws.delta[v] += ws.sigma[v] / ws.sigma[w] * (1.0 + ws.delta[w]);
      }
    }
    if (w != s) scores[w] += 0.5 * ws.delta[w];
  }
  for (NodeId v : ws.order) {
    ws.dist[v] = -1;
    ws.sigma[v] = 0.0;
    ws.delta[v] = 0.0;
  }
}

}  // namespace

CentralityScores betweenness(const Graph& g, unsigned threads) {
  const std::size_t n = g.num_nodes();
  if (n == 0) return {};
  const std::size_t blocks = std::min(kSourceBlocks, n);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));

  std::vector<std::vector<double>> partial(blocks, std::vector<double>(n, 0.0));
  std::atomic<std::size_t> next_block{0};
  auto worker = [&] {
    BrandesWorkspace ws(n);
    for (std::size_t b = next_block++; b < blocks; b = next_block++) {
      const std::size_t begin = b * n / blocks;
      const std::size_t end = (b + 1) * n / blocks;
      for (std::size_t s = begin; s < end; ++s) {
        accumulate_source(g, static_cast<NodeId>(s), ws, partial[b]);
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  CentralityScores scores(n, 0.0);
  for (const auto& block : partial) {
    for (std::size_t v = 0; v < n; ++v) scores[v] += block[v];
  }
  return scores;
}

CentralityScores brute_force_betweenness(const Graph& g, std::size_t max_nodes) {
  const std::size_t n = g.num_nodes();
  if (n > max_nodes) {
    throw SizeLimitError("brute-force betweenness limited to " +
                         std::to_string(max_nodes) + " nodes, got " +
                         std::to_string(n));
  }
  constexpr int kUnreached = -1;
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, kUnreached));
  std::vector<std::vector<double>> paths(n, std::vector<double>(n, 0.0));
  for (NodeId s = 0; s < n; ++s) {
    auto& d = dist[s];
    auto& p = paths[s];
    std::vector<NodeId> frontier{s};
    d[s] = 0;
    p[s] = 1.0;
    for (int level = 0; !frontier.empty(); ++level) {
      std::vector<NodeId> next;
      for (NodeId v : frontier) {
        for (NodeId w : g.neighbors(v)) {
          if (d[w] == kUnreached) {
            d[w] = level + 1;
            next.push_back(w);
          }
          if (d[w] == level + 1) p[w] += p[v];
        }
      }
      frontier = std::move(next);
    }
  }

  CentralityScores scores(n, 0.0);
  for (NodeId s = 0; s < n; ++s) {
    for (NodeId t = s + 1; t < n; ++t) {
      if (dist[s][t] == kUnreached) continue;
      for (NodeId v = 0; v < n; ++v) {
        if (v == s || v == t || dist[s][v] == kUnreached || dist[v][t] == kUnreached) {
          continue;
        }
        if (dist[s][v] + dist[v][t] == dist[s][t]) {
          scores[v] += paths[s][v] * paths[v][t] / paths[s][t];
        }
      }
    }
  }
  return scores;
}

TailDecomposition find_tails(const Graph& g) {
  const std::size_t n = g.num_nodes();
  TailDecomposition out;
  out.in_core.assign(n, 1);

  std::vector<std::size_t> degree(n);
  std::vector<NodeId> queue;
  for (NodeId v = 0; v < n; ++v) {
    degree[v] = g.degree(v);
    if (degree[v] <= 1) {
      out.in_core[v] = 0;
      queue.push_back(v);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (NodeId w : g.neighbors(queue[head])) {
      if (out.in_core[w] && --degree[w] <= 1) {
        out.in_core[w] = 0;
        queue.push_back(w);
      }
    }
  }

  std::vector<char> visited(n, 0);
  for (NodeId s = 0; s < n; ++s) {
    if (out.in_core[s]) {
      out.core.push_back(s);
      continue;
    }
    if (visited[s]) continue;
    Tail tail;
    std::vector<NodeId> stack{s};
    visited[s] = 1;
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      tail.nodes.push_back(v);
      for (NodeId w : g.neighbors(v)) {
        if (out.in_core[w]) {
          // A peeled component touches the core through at most one edge.
          tail.attachment = w;
        } else if (!visited[w]) {
          visited[w] = 1;
          stack.push_back(w);
        }
      }
    }
    std::sort(tail.nodes.begin(), tail.nodes.end());
    out.tails.push_back(std::move(tail));
  }
  return out;
}

StrippedGraph strip_tails(const Graph& g, const TailDecomposition& t) {
  std::size_t covered = t.core.size();
  for (const Tail& tail : t.tails) covered += tail.nodes.size();
  if (t.in_core.size() != g.num_nodes() || covered != g.num_nodes()) {
    throw std::invalid_argument("tail decomposition does not match the graph");
  }
  for (NodeId v : t.core) {
    if (v >= g.num_nodes() || !t.in_core[v]) {
      throw std::invalid_argument("tail decomposition does not match the graph");
    }
  }

  StrippedGraph out;
  if (t.core.empty()) {
    out.graph = g;
    out.to_parent.resize(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) out.to_parent[v] = v;
    out.skipped = true;
    return out;
  }
  out.graph = g.induced_subgraph(t.core);
  out.to_parent = t.core;
  return out;
}

CentralityScores lift_scores(const StrippedGraph& stripped,
                             const CentralityScores& scores,
                             std::size_t parent_nodes) {
  CentralityScores out(parent_nodes, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < stripped.to_parent.size(); ++i) {
    out[stripped.to_parent[i]] = scores[i];
  }
  return out;
}

}  // namespace cbc
