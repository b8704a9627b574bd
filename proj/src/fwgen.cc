#include "cbc/fwgen.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_set>

namespace cbc {
namespace {

std::uint64_t pairs_of(std::uint64_t s) { return s * (s - (s > 0 ? 1 : 0)) / 2; }

// Uniform integer in [0, bound) with rejection, independent of the standard
// library's distribution implementation.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// Pair index p in [0, s(s-1)/2) -> (a, b) with b < a, p = a(a-1)/2 + b.
std::pair<std::uint64_t, std::uint64_t> decode_pair(std::uint64_t p) {
  auto a = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(p))) / 2.0);
  while (a * (a - 1) / 2 > p) --a;
  while ((a + 1) * a / 2 <= p) ++a;
  return {a, p - a * (a - 1) / 2};
}

// k distinct values from [0, range), Floyd's algorithm; insertion order.
std::vector<std::uint64_t> sample_distinct(std::mt19937_64& rng, std::uint64_t range,
                                           std::uint64_t k) {
  std::vector<std::uint64_t> out;
  out.reserve(k);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(k * 2);
  for (std::uint64_t j = range - k; j < range; ++j) {
    const std::uint64_t t = uniform_below(rng, j + 1);
    const std::uint64_t pick = chosen.insert(t).second ? t : j;
    if (pick == j) chosen.insert(j);
    out.push_back(pick);
  }
  return out;
}

// Largest-remainder apportionment of `total` by `weights`, remainders to the
// largest fractional parts (lowest index on ties).
std::vector<std::uint64_t> apportion(std::uint64_t total,
                                     const std::vector<double>& weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::uint64_t> out(weights.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = static_cast<double>(total) * weights[i] / sum;
    out[i] = static_cast<std::uint64_t>(std::floor(exact));
    assigned += out[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < total; ++r, ++assigned) {
    ++out[remainders[r % remainders.size()].second];
  }
  return out;
}

}  // namespace

std::size_t GenParams::edge_count() const {
  if (edges.has_value() == density.has_value()) {
    throw std::invalid_argument("exactly one of edges and density must be given");
  }
  if (n_nodes < 2) throw std::invalid_argument("need at least two nodes");
  if (n_clusters < 1 || n_clusters > n_nodes) {
    throw std::invalid_argument("cluster count must be in [1, nodes]");
  }
  if (!(assortativity > 0.5 && assortativity <= 1.0)) {
    throw std::invalid_argument("assortativity must be in (0.5, 1]");
  }
  if (!(skew >= 0.0)) throw std::invalid_argument("skew must be >= 0");
  const std::uint64_t complete = pairs_of(n_nodes);
  std::uint64_t m;
  if (edges) {
    m = *edges;
  } else {
    if (!(*density >= 0.0 && *density <= 1.0)) {
      throw std::invalid_argument("density must be in [0, 1]");
    }
    m = static_cast<std::uint64_t>(std::llround(*density * static_cast<double>(complete)));
  }
  if (m > complete) throw InfeasibleParams("more edges than the complete graph holds");
  return m;
}

std::vector<std::size_t> planted_cluster_sizes(std::size_t n, std::size_t k,
                                               double skew) {
  std::vector<double> weights(k);
  for (std::size_t i = 0; i < k; ++i) {
    weights[i] = std::pow(static_cast<double>(i + 1), -skew);
  }
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> sizes(k);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sizes[i] = static_cast<std::size_t>(std::floor(static_cast<double>(n) * weights[i] / sum));
    assigned += sizes[i];
  }
  // Weights are non-increasing, so topping up from the front keeps order.
  for (std::size_t i = 0; assigned < n; i = (i + 1) % k, ++assigned) ++sizes[i];
  return sizes;
}

std::size_t intra_edge_quota(std::size_t m, double assortativity) {
  const double exact = assortativity * static_cast<double>(m);
  const auto quota = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  return std::min(quota, m);
}

GeneratedGraph generate(const GenParams& params) {
  const std::uint64_t m = params.edge_count();
  const std::size_t n = params.n_nodes;
  const std::size_t k = params.n_clusters;
  const auto sizes = planted_cluster_sizes(n, k, params.skew);
  for (std::size_t i = 0; i < k; ++i) {
    if (sizes[i] < 2) {
      throw InfeasibleParams("cluster " + std::to_string(i) + " would have " +
                             std::to_string(sizes[i]) + " node(s); need at least 2");
    }
  }

  std::mt19937_64 rng(params.seed);
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(perm[i - 1], perm[uniform_below(rng, i)]);
  }
  std::vector<std::vector<NodeId>> members(k);
  std::vector<std::size_t> cluster_of(n);
  for (std::size_t i = 0, pos = 0; i < k; ++i) {
    members[i].assign(perm.begin() + pos, perm.begin() + pos + sizes[i]);
    for (NodeId v : members[i]) cluster_of[v] = i;
    pos += sizes[i];
  }

  const std::uint64_t intra = intra_edge_quota(m, params.assortativity);
  const std::uint64_t inter = m - intra;
  std::vector<double> capacity_weights(k);
  std::uint64_t intra_capacity = 0;
  for (std::size_t i = 0; i < k; ++i) {
    capacity_weights[i] = static_cast<double>(pairs_of(sizes[i]));
    intra_capacity += pairs_of(sizes[i]);
  }
  const auto quotas = apportion(intra, capacity_weights);
  for (std::size_t i = 0; i < k; ++i) {
    if (quotas[i] > pairs_of(sizes[i])) {
      throw InfeasibleParams("cluster " + std::to_string(i) + " (" +
                             std::to_string(sizes[i]) + " nodes) cannot host " +
                             std::to_string(quotas[i]) + " intra edges");
    }
  }
  const std::uint64_t inter_capacity = pairs_of(n) - intra_capacity;
  if (inter > inter_capacity) {
    throw InfeasibleParams("inter-cluster edge budget " + std::to_string(inter) +
                           " exceeds the " + std::to_string(inter_capacity) +
                           " available pairs");
  }

  GraphBuilder builder;
  for (std::size_t v = 0; v < n; ++v) builder.add_node(std::to_string(v));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::uint64_t p : sample_distinct(rng, pairs_of(sizes[i]), quotas[i])) {
      const auto [a, b] = decode_pair(p);
      builder.add_edge(members[i][a], members[i][b]);
    }
  }

  if (2 * inter <= inter_capacity) {
    std::unordered_set<std::uint64_t> used;
    used.reserve(inter * 2);
    while (used.size() < inter) {
      auto u = static_cast<NodeId>(uniform_below(rng, n));
      auto v = static_cast<NodeId>(uniform_below(rng, n));
      if (cluster_of[u] == cluster_of[v]) continue;
      if (u > v) std::swap(u, v);
      if (used.insert(static_cast<std::uint64_t>(u) * n + v).second) builder.add_edge(u, v);
    }
  } else {
    std::vector<std::pair<NodeId, NodeId>> all;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (cluster_of[u] != cluster_of[v]) all.emplace_back(u, v);
      }
    }
    for (std::uint64_t i = 0; i < inter; ++i) {
      std::swap(all[i], all[i + uniform_below(rng, all.size() - i)]);
      builder.add_edge(all[i].first, all[i].second);
    }
  }

  GeneratedGraph out;
  out.graph = std::move(builder).build();
  out.truth = Clustering(n, std::move(members));
  out.intra_edges = intra;
  return out;
}

void write_pair(const Graph& g, const Clustering& truth, const std::string& prefix) {
  {
    std::ofstream out(prefix + ".edges");
    if (!out) throw std::runtime_error("cannot write " + prefix + ".edges");
    write_edge_list(out, g);
    if (!out) throw std::runtime_error("write failed for " + prefix + ".edges");
  }
  write_clustering_file(prefix + ".truth", g, truth);
}

PlantedPair read_pair(const std::string& prefix) {
  const LoadResult loaded = load_graph_file(prefix + ".edges", GraphFormat::kEdgeList);
  std::ifstream in(prefix + ".truth");
  if (!in) throw std::runtime_error("cannot open " + prefix + ".truth");
  GraphWithClustering both = read_clustering_with_nodes(in, loaded.graph);
  return {std::move(both.graph), std::move(both.clustering)};
}

}  // namespace cbc
