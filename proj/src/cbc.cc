#include "cbc/cbc.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cbc/cpu_timer.h"
#include "cbc/metrics.h"

namespace cbc {
namespace {

using Memberships = std::vector<std::vector<std::size_t>>;

std::uint64_t isqrt(std::uint64_t x) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

// ceil(sqrt(x)) for x >= 1.
std::uint64_t ceil_sqrt(std::uint64_t x) { return x == 0 ? 0 : isqrt(x - 1) + 1; }

double size_limit(const CbcParams& params, std::size_t num_nodes) {
  return params.max_cluster_frac * static_cast<double>(num_nodes);
}

bool ratio_below(std::uint64_t d_in, std::uint64_t d_out, double s) {
  if (d_in == 0) return d_out == 0;
  return static_cast<double>(d_out) < s * static_cast<double>(d_in);
}

std::uint64_t volume(const Graph& g, const Cluster& cluster) {
  std::uint64_t vol = 0;
  for (NodeId v : cluster.members) vol += g.degree(v);
  return vol;
}

bool has_overlap(const Clustering& c) {
  std::vector<char> seen(c.num_nodes(), 0);
  for (const Cluster& cluster : c.clusters()) {
    for (NodeId v : cluster.members) {
      if (seen[v]) return true;
      seen[v] = 1;
    }
  }
  return false;
}

void rebuild_members(Clustering& c, const Memberships& m) {
  for (Cluster& cluster : c.clusters()) cluster.members.clear();
  for (NodeId v = 0; v < m.size(); ++v) {
    for (std::size_t ci : m[v]) c[ci].members.push_back(v);
  }
}

void drop_empty(Clustering& c) {
  auto& clusters = c.clusters();
  clusters.erase(std::remove_if(clusters.begin(), clusters.end(),
                                [](const Cluster& x) { return x.members.empty(); }),
                 clusters.end());
}

// Connected components of the subgraph induced by `members`, largest first
// (ties by smallest node), each sorted.
std::vector<std::vector<NodeId>> cluster_components(const Graph& g,
                                                    const std::vector<NodeId>& members,
                                                    std::vector<char>& mark) {
  for (NodeId v : members) mark[v] = 1;
  std::vector<std::vector<NodeId>> parts;
  std::vector<NodeId> stack;
  for (NodeId s : members) {
    if (mark[s] != 1) continue;
    std::vector<NodeId> part;
    mark[s] = 2;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      part.push_back(v);
      for (NodeId w : g.neighbors(v)) {
        if (mark[w] == 1) {
          mark[w] = 2;
          stack.push_back(w);
        }
      }
    }
    std::sort(part.begin(), part.end());
    parts.push_back(std::move(part));
  }
  for (NodeId v : members) mark[v] = 0;
  std::stable_sort(parts.begin(), parts.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return parts;
}

// Per-node link counts into clusters, reset between uses.
class LinkTally {
 public:
  explicit LinkTally(std::size_t clusters) : count_(clusters, 0) {}

  void tally(const Graph& g, NodeId x, const Memberships& m) {
    clear();
    for (NodeId w : g.neighbors(x)) {
      for (std::size_t ci : m[w]) {
        if (count_[ci]++ == 0) touched_.push_back(ci);
      }
    }
  }
  std::size_t operator[](std::size_t ci) const { return count_[ci]; }
  const std::vector<std::size_t>& touched() const { return touched_; }

  // Cluster with the most links among those not in `exclude`; lowest index
  // on ties. Returns nullopt if no such cluster has a link.
  std::optional<std::size_t> best(const std::vector<std::size_t>& exclude) const {
    std::optional<std::size_t> out;
    for (std::size_t ci : touched_) {
      if (std::find(exclude.begin(), exclude.end(), ci) != exclude.end()) continue;
      if (!out || count_[ci] > count_[*out] ||
          (count_[ci] == count_[*out] && ci < *out)) {
        out = ci;
      }
    }
    return out;
  }

  void clear() {
    for (std::size_t ci : touched_) count_[ci] = 0;
    touched_.clear();
  }

 private:
  std::vector<std::size_t> count_;
  std::vector<std::size_t> touched_;
};

}  // namespace

void CbcParams::validate() const {
  if (!(s > 0.0)) throw std::invalid_argument("s must be positive");
  if (!(max_cluster_frac > 0.0 && max_cluster_frac <= 1.0)) {
    throw std::invalid_argument("max cluster fraction must be in (0, 1]");
  }
  if (min_cluster_size < 1) throw std::invalid_argument("min cluster size must be >= 1");
  if (max_retries < 1) throw std::invalid_argument("max retries must be >= 1");
}

std::vector<std::size_t> clique_size_schedule(std::size_t n, std::size_t max_retries) {
  if (n == 0) throw std::invalid_argument("clique schedule needs n >= 1");
  const std::uint64_t root = ceil_sqrt(n);
  std::vector<std::size_t> out;
  for (std::uint64_t k = 1; out.size() < max_retries; ++k) {
    // ceil(k * sqrt(n)) == ceil(sqrt(k^2 n)); ceil(sqrt(n) / k) == ceil(ceil(sqrt(n)) / k).
    if (k > 1) out.push_back(std::max<std::uint64_t>(1, (root + k - 1) / k));
    if (out.size() < max_retries) {
      out.push_back(std::max<std::uint64_t>(1, ceil_sqrt(k * k * n)));
    }
  }
  return out;
}

std::size_t initiate_cliques(const Graph& g, const CentralityScores& cb,
                             Clustering& c, std::size_t max_clique_size) {
  const std::size_t n = g.num_nodes();
  if (cb.size() != n || c.num_nodes() != n) {
    throw std::invalid_argument("centrality / clustering size does not match graph");
  }
  std::vector<char> assigned(n, 0);
  for (const Cluster& cluster : c.clusters()) {
    for (NodeId v : cluster.members) assigned[v] = 1;
  }
  std::vector<NodeId> order;
  for (NodeId v = 0; v < n; ++v) {
    if (std::isfinite(cb[v])) order.push_back(v);
  }
  if (order.empty()) return 0;
  if (max_clique_size == 0) max_clique_size = clique_size_schedule(order.size(), 1)[0];

  auto by_centrality = [&](NodeId a, NodeId b) {
    return cb[a] < cb[b] || (cb[a] == cb[b] && a < b);
  };
  std::sort(order.begin(), order.end(), by_centrality);
  auto usable = [&](NodeId v) { return !assigned[v] && std::isfinite(cb[v]); };

  const std::size_t cap = 2 * max_clique_size;
  std::size_t added = 0;
  std::vector<char> queued(n, 0);
  for (NodeId kernel : order) {
    if (assigned[kernel]) continue;
    std::vector<NodeId> members{kernel};
    assigned[kernel] = 1;
    for (NodeId p : g.neighbors(kernel)) {
      if (usable(p)) {
        assigned[p] = 1;
        members.push_back(p);
      }
    }
    if (members.size() <= max_clique_size) {
      std::vector<NodeId> frontier = members;
      while (members.size() < cap && !frontier.empty()) {
        std::vector<NodeId> layer;
        for (NodeId v : frontier) {
          for (NodeId w : g.neighbors(v)) {
            if (usable(w) && !queued[w]) {
              queued[w] = 1;
              layer.push_back(w);
            }
          }
        }
        for (NodeId w : layer) queued[w] = 0;
        std::sort(layer.begin(), layer.end(), by_centrality);
        if (layer.size() > cap - members.size()) layer.resize(cap - members.size());
        for (NodeId w : layer) {
          assigned[w] = 1;
          members.push_back(w);
        }
        frontier = std::move(layer);
      }
    }
    if (members.size() <= 2) {
      for (NodeId v : members) assigned[v] = 0;
      continue;
    }
    c.add(std::move(members));
    ++added;
  }
  return added;
}

void handle_tails(const Graph& g, const TailDecomposition& t, Clustering& c,
                  const CbcParams& params) {
  if (t.tails.empty()) return;
  const double limit = size_limit(params, g.num_nodes());
  const Memberships m = c.memberships();
  auto orphan = [&](NodeId v) { return m[v].empty(); };

  for (const Tail& tail : t.tails) {
    if (tail.nodes.size() != 1 || !tail.attachment) continue;
    const NodeId v = tail.nodes[0];
    if (!orphan(v)) continue;
    for (std::size_t ci : m[*tail.attachment]) {
      auto& members = c[ci].members;
      members.insert(std::lower_bound(members.begin(), members.end(), v), v);
    }
  }

  for (const Tail& tail : t.tails) {
    if (tail.nodes.size() < 2 ||
        !std::all_of(tail.nodes.begin(), tail.nodes.end(), orphan)) {
      continue;
    }
    if (tail.attachment && !m[*tail.attachment].empty()) {
      Cluster& target = c[m[*tail.attachment].front()];
      if (static_cast<double>(target.size() + tail.nodes.size()) <= limit) {
        std::vector<NodeId> merged;
        std::set_union(target.members.begin(), target.members.end(),
                       tail.nodes.begin(), tail.nodes.end(),
                       std::back_inserter(merged));
        target.members = std::move(merged);
        continue;
      }
    }
    c.add(tail.nodes);
  }
}

std::uint64_t BlockMatrix::row_sum(std::size_t i) const {
  std::uint64_t sum = 0;
  for (std::size_t k = 0; k < l_; ++k) sum += (*this)(i, k);
  return sum;
}

bool BlockMatrix::symmetric() const {
  for (std::size_t i = 0; i < l_; ++i) {
    for (std::size_t j = i + 1; j < l_; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) return false;
    }
  }
  return true;
}

void BlockMatrix::erase(std::size_t index) {
  std::vector<std::uint64_t> next;
  next.reserve((l_ - 1) * (l_ - 1));
  for (std::size_t i = 0; i < l_; ++i) {
    if (i == index) continue;
    for (std::size_t j = 0; j < l_; ++j) {
      if (j != index) next.push_back((*this)(i, j));
    }
  }
  data_ = std::move(next);
  --l_;
}

BlockMatrix build_block_matrix(const Graph& g, const Clustering& c) {
  BlockMatrix b(c.size());
  const Memberships m = c.memberships();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const Edge& e : g.edges()) {
    if (m[e.u].empty() || m[e.v].empty()) continue;
    pairs.clear();
    for (std::size_t i : m[e.u]) {
      for (std::size_t j : m[e.v]) pairs.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    for (const auto& [i, j] : pairs) {
      ++b.at(i, j);
      if (i != j) ++b.at(j, i);
    }
  }
  return b;
}

std::optional<std::pair<std::size_t, std::size_t>> select_merge_pair(
    const BlockMatrix& b, const Clustering& c, const CbcParams& params,
    std::size_t num_nodes) {
  const std::size_t l = c.size();
  if (b.size() != l) throw std::invalid_argument("block matrix does not match clustering");
  const double limit = size_limit(params, num_nodes);
  const bool overlap = has_overlap(c);

  auto union_size = [&](std::size_t i, std::size_t j) -> std::size_t {
    const auto& a = c[i].members;
    const auto& d = c[j].members;
    if (!overlap) return a.size() + d.size();
    std::size_t common = 0;
    for (auto p = a.begin(), q = d.begin(); p != a.end() && q != d.end();) {
      if (*p < *q) {
        ++p;
      } else if (*q < *p) {
        ++q;
      } else {
        ++common, ++p, ++q;
      }
    }
    return a.size() + d.size() - common;
  };

  struct Candidate {
    std::size_t i, j;
    std::uint64_t num, den;  // score = num / den
    std::size_t union_size;
  };
  std::optional<Candidate> best;
  for (std::size_t i = 0; i < l; ++i) {
    const std::uint64_t row_i = b.row_sum(i);
    for (std::size_t j = i + 1; j < l; ++j) {
      const std::uint64_t bij = b(i, j);
      if (bij == 0) continue;
      if (c[i].correlated && c[j].correlated) continue;
      const std::size_t u = union_size(i, j);
      if (static_cast<double>(u) > limit) continue;
      const std::uint64_t den =
          std::min(std::max<std::uint64_t>(b(i, i), 1), std::max<std::uint64_t>(b(j, j), 1));
      const bool admitted = 2 * bij > row_i || !c[i].correlated || !c[j].correlated ||
                            static_cast<double>(bij) >= params.s * static_cast<double>(den);
      if (!admitted) continue;
      const Candidate cand{i, j, bij, den, u};
      if (!best) {
        best = cand;
        continue;
      }
      const std::uint64_t lhs = cand.num * best->den;
      const std::uint64_t rhs = best->num * cand.den;
      if (lhs > rhs || (lhs == rhs && cand.union_size < best->union_size)) best = cand;
    }
  }
  if (!best) return std::nullopt;
  return std::make_pair(best->i, best->j);
}

namespace {

double ratio_of(const CutSizes& cut) {
  return static_cast<double>(cut.d_out) / static_cast<double>(cut.d_in);
}

// For a member of `from` with `inside` links there and as many into some
// other cluster: the cluster whose taking over the node most lowers
// ratio(from) + ratio(to), if any lowers it.
std::optional<std::size_t> tie_break_target(const std::vector<CutSizes>& cut,
                                            const LinkTally& links,
                                            const std::vector<std::size_t>& holding,
                                            std::size_t from, std::size_t inside,
                                            std::size_t deg) {
  const CutSizes from_after{cut[from].d_in - inside,
                            cut[from].d_out - (deg - inside) + inside};
  if (cut[from].d_in == 0 || from_after.d_in == 0) return std::nullopt;
  std::optional<std::size_t> target;
  double best_gain = 0.0;
  for (std::size_t k : links.touched()) {
    if (links[k] != inside || cut[k].d_in == 0 ||
        std::find(holding.begin(), holding.end(), k) != holding.end()) {
      continue;
    }
    const CutSizes to_after{cut[k].d_in + inside, cut[k].d_out - inside + (deg - inside)};
    const double before = ratio_of(cut[from]) + ratio_of(cut[k]);
    const double after = ratio_of(from_after) + ratio_of(to_after);
    const double gain = before - after;
    if (gain > 1e-12 * before && (!target || gain > best_gain ||
                                  (gain == best_gain && k < *target))) {
      target = k;
      best_gain = gain;
    }
  }
  return target;
}

}  // namespace

std::size_t reassign_nodes(const Graph& g, Clustering& c, const CbcParams& params) {
  const std::size_t n = g.num_nodes();
  Memberships m = c.memberships();
  LinkTally links(c.size());
  std::vector<char> touched_cluster(c.size(), 0);
  std::vector<CutSizes> cut(c.size());
  for (std::size_t ci = 0; ci < c.size(); ++ci) cut[ci] = cluster_cut_sizes(g, c[ci].members);
  std::size_t changes = 0;

  for (NodeId x = 0; x < n; ++x) {
    if (m[x].empty()) continue;
    links.tally(g, x, m);
    const std::size_t deg = g.degree(x);
    auto join = [&](std::size_t k) {
      m[x].insert(std::lower_bound(m[x].begin(), m[x].end(), k), k);
      touched_cluster[k] = 1;
      cut[k] = {cut[k].d_in + links[k], cut[k].d_out - links[k] + (deg - links[k])};
    };
    const std::vector<std::size_t> current = m[x];
    for (std::size_t ci : current) {
      const std::size_t inside = links[ci];
      auto leave = [&] {
        m[x].erase(std::find(m[x].begin(), m[x].end(), ci));
        touched_cluster[ci] = 1;
        cut[ci] = {cut[ci].d_in - inside, cut[ci].d_out - (deg - inside) + inside};
        ++changes;
      };
      if (params.flake_strict) {
        if (!(inside > deg - inside)) leave();
        continue;
      }
      const auto best = links.best(m[x]);
      if (inside == 0 || (best && links[*best] > inside)) {
        leave();
        if (best && links[*best] > inside) join(*best);
        continue;
      }
      // Tied with another cluster: move if that lowers the two ratios' sum.
      const auto tie = tie_break_target(cut, links, m[x], ci, inside, deg);
      if (tie) {
        leave();
        join(*tie);
      }
    }
  }
  links.clear();
  if (changes == 0) return 0;

  rebuild_members(c, m);
  std::vector<char> mark(n, 0);
  const std::size_t l = c.size();
  for (std::size_t ci = 0; ci < l; ++ci) {
    if (!touched_cluster[ci] || c[ci].members.size() < 2) continue;
    auto parts = cluster_components(g, c[ci].members, mark);
    if (parts.size() < 2) continue;
    c[ci].members = std::move(parts[0]);
    for (std::size_t k = 1; k < parts.size(); ++k) c.add(std::move(parts[k]));
  }
  drop_empty(c);
  return changes;
}

std::size_t manage_subsets(Clustering& c) {
  const std::size_t l = c.size();
  const Memberships m = c.memberships();
  std::vector<char> drop(l, 0);
  for (std::size_t i = 0; i < l; ++i) {
    const auto& a = c[i].members;
    if (a.empty()) {
      drop[i] = 1;
      continue;
    }
    for (std::size_t j : m[a.front()]) {
      if (j == i) continue;
      const auto& d = c[j].members;
      if (d.size() < a.size() || (d.size() == a.size() && j > i)) continue;
      if (std::includes(d.begin(), d.end(), a.begin(), a.end())) {
        drop[i] = 1;
        break;
      }
    }
  }
  std::size_t removed = 0;
  for (std::size_t i = l; i-- > 0;) {
    if (drop[i]) {
      c.erase(i);
      ++removed;
    }
  }
  return removed;
}

std::size_t add_orphans(const Graph& g, Clustering& c) {
  Memberships m = c.memberships();
  LinkTally links(c.size());
  const std::vector<std::size_t> none;
  std::size_t adopted = 0;
  for (bool progress = true; progress;) {
    progress = false;
    for (NodeId x = 0; x < g.num_nodes(); ++x) {
      if (!m[x].empty()) continue;
      links.tally(g, x, m);
      if (const auto best = links.best(none)) {
        m[x].push_back(*best);
        ++adopted;
        progress = true;
      }
    }
  }
  links.clear();
  if (adopted > 0) rebuild_members(c, m);
  return adopted;
}

std::size_t adopt_improving_orphans(const Graph& g, Clustering& c,
                                   const CbcParams& params) {
  Memberships m = c.memberships();
  std::vector<CutSizes> cut(c.size());
  std::vector<std::size_t> size(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    cut[i] = cluster_cut_sizes(g, c[i].members);
    size[i] = c[i].size();
  }
  const double limit = size_limit(params, g.num_nodes());
  LinkTally links(c.size());
  const std::vector<std::size_t> none;
  std::size_t adopted = 0;
  for (bool progress = true; progress;) {
    progress = false;
    for (NodeId x = 0; x < g.num_nodes(); ++x) {
      if (!m[x].empty()) continue;
      links.tally(g, x, m);
      const auto best = links.best(none);
      if (!best || static_cast<double>(size[*best] + 1) > limit) continue;
      const std::uint64_t a = links[*best];
      const CutSizes before = cut[*best];
      const CutSizes after{before.d_in + a, before.d_out - a + (g.degree(x) - a)};
      // after.d_out / after.d_in < before.d_out / before.d_in
      if (after.d_out * before.d_in >= before.d_out * after.d_in) continue;
      cut[*best] = after;
      ++size[*best];
      m[x].push_back(*best);
      ++adopted;
      progress = true;
    }
  }
  links.clear();
  if (adopted > 0) rebuild_members(c, m);
  return adopted;
}

bool cluster_conforms(const Graph& g, const Cluster& cluster, const CbcParams& params) {
  if (cluster.size() < params.min_cluster_size ||
      static_cast<double>(cluster.size()) > size_limit(params, g.num_nodes())) {
    return false;
  }
  const CutSizes cut = cluster_cut_sizes(g, cluster.members);
  return ratio_below(cut.d_in, cut.d_out, params.s);
}

namespace {

// Block matrix plus per-cluster volumes, kept consistent with a clustering.
class MergeState {
 public:
  MergeState(const Graph& g, Clustering& c, const CbcParams& params)
      : g_(g), c_(c), params_(params) {}

  void refresh() {
    b_ = build_block_matrix(g_, c_);
    vol_.resize(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) vol_[i] = volume(g_, c_[i]);
    overlap_ = has_overlap(c_);
    update_flags();
  }

  const BlockMatrix& block() const { return b_; }

  void merge(std::size_t i, std::size_t j) {
    std::vector<NodeId> merged;
    std::set_union(c_[i].members.begin(), c_[i].members.end(), c_[j].members.begin(),
                   c_[j].members.end(), std::back_inserter(merged));
    c_[i].members = std::move(merged);
    c_.erase(j);
    if (overlap_) {
      refresh();
      return;
    }
    // Disjoint clusters: fold row/column j into i.
    const std::size_t l = b_.size();
    b_.at(i, i) += b_(j, j) + b_(i, j);
    for (std::size_t k = 0; k < l; ++k) {
      if (k == i || k == j) continue;
      b_.at(i, k) += b_(j, k);
      b_.at(k, i) = b_(i, k);
    }
    b_.erase(j);
    vol_[i] += vol_[j];
    vol_.erase(vol_.begin() + static_cast<std::ptrdiff_t>(j));
    update_flags();
  }

  std::uint64_t d_in(std::size_t i) const { return b_(i, i); }
  std::uint64_t d_out(std::size_t i) const { return vol_[i] - 2 * b_(i, i); }

  // Highest-ratio cluster violating the predicate or the size bounds.
  std::optional<std::size_t> worst_violator() const {
    const double limit = size_limit(params_, g_.num_nodes());
    std::optional<std::size_t> worst;
    double worst_ratio = -1.0;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      const std::size_t size = c_[i].size();
      const bool ok = c_[i].correlated && size >= params_.min_cluster_size &&
                      static_cast<double>(size) <= limit;
      if (ok) continue;
      const double ratio = d_in(i) == 0 ? (d_out(i) == 0 ? 0.0 : std::numeric_limits<double>::infinity())
                                        : static_cast<double>(d_out(i)) / static_cast<double>(d_in(i));
      if (!worst || ratio > worst_ratio) {
        worst = i;
        worst_ratio = ratio;
      }
    }
    return worst;
  }

 private:
  void update_flags() {
    for (std::size_t i = 0; i < c_.size(); ++i) {
      c_[i].correlated = ratio_below(d_in(i), d_out(i), params_.s);
    }
  }

  const Graph& g_;
  Clustering& c_;
  const CbcParams& params_;
  BlockMatrix b_;
  std::vector<std::uint64_t> vol_;
  bool overlap_ = false;
};

}  // namespace

MergeStats merge_loop(const Graph& g, Clustering& c, const CbcParams& params,
                      PhaseTimes* times) {
  PhaseTimes local;
  PhaseTimes& t = times != nullptr ? *times : local;
  MergeStats stats;
  MergeState state(g, c, params);
  state.refresh();

  // Merges and deletions shrink the clustering; adoption and reassignment
  // are monotone. The cap only guards against adopt/delete ping-pong.
  const std::size_t max_iterations = 4 * (c.size() + g.num_nodes()) + 16;
  while (stats.iterations++ < max_iterations) {
    {
      CpuTimer timer;
      const std::size_t changed = reassign_nodes(g, c, params);
      if (changed > 0) state.refresh();
      t.reassignment_ms += timer.elapsed_ms();
    }
    CpuTimer timer;
    if (const auto pair = select_merge_pair(state.block(), c, params, g.num_nodes())) {
      state.merge(pair->first, pair->second);
      ++stats.merges;
      t.merging_ms += timer.elapsed_ms();
      continue;
    }
    if (manage_subsets(c) > 0) {
      state.refresh();
      t.merging_ms += timer.elapsed_ms();
      continue;
    }
    if (const auto worst = state.worst_violator()) {
      c.erase(*worst);
      ++stats.deletions;
      if (params.minimize_orphans) stats.adopted += add_orphans(g, c);
      state.refresh();
      t.merging_ms += timer.elapsed_ms();
      continue;
    }
    const std::size_t adopted = params.minimize_orphans
                                    ? add_orphans(g, c)
                                    : adopt_improving_orphans(g, c, params);
    stats.adopted += adopted;
    if (adopted > 0) {
      state.refresh();
      t.merging_ms += timer.elapsed_ms();
      continue;
    }
    t.merging_ms += timer.elapsed_ms();
    break;
  }
  return stats;
}

namespace {

bool adoptable_orphan(const Graph& g, const Clustering& c) {
  const Memberships m = c.memberships();
  for (NodeId x = 0; x < g.num_nodes(); ++x) {
    if (!m[x].empty()) continue;
    for (NodeId w : g.neighbors(x)) {
      if (!m[w].empty()) return true;
    }
  }
  return false;
}

bool clustering_conforms(const Graph& g, const Clustering& c, const CbcParams& params) {
  if (c.empty() && g.num_edges() > 0) return false;
  for (const Cluster& cluster : c.clusters()) {
    if (!cluster_conforms(g, cluster, params)) return false;
  }
  return !params.minimize_orphans || !adoptable_orphan(g, c);
}

// Lower is better; non-empty clusterings with a defined score come first.
double round_score(const Graph& g, const Clustering& c) {
  if (c.empty()) return std::numeric_limits<double>::infinity();
  const QualityReport report = quality_report(g, c);
  return report.q_c_defined ? report.q_c : std::numeric_limits<double>::max();
}

}  // namespace

CbcResult cbc_cluster(const Graph& g, const CbcParams& params, unsigned threads) {
  params.validate();
  if (g.num_nodes() == 0) throw std::invalid_argument("cannot cluster an empty graph");

  CbcResult result;
  TailDecomposition tails = find_tails(g);
  const StrippedGraph stripped = strip_tails(g, tails);
  result.tails_skipped = stripped.skipped;
  if (stripped.skipped) {
    // Pure forest: cluster the whole graph, no tails to place.
    tails.tails.clear();
    tails.core.resize(g.num_nodes());
    std::iota(tails.core.begin(), tails.core.end(), NodeId{0});
    tails.in_core.assign(g.num_nodes(), 1);
  }

  CentralityScores cb;
  {
    CpuTimer timer;
    cb = lift_scores(stripped, betweenness(stripped.graph, threads), g.num_nodes());
    result.times.centrality_ms = timer.elapsed_ms();
  }

  Clustering c(g.num_nodes());
  std::optional<Clustering> best;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t max_size :
       clique_size_schedule(stripped.graph.num_nodes(), params.max_retries)) {
    ++result.rounds;
    {
      CpuTimer timer;
      initiate_cliques(g, cb, c, max_size);
      handle_tails(g, tails, c, params);
      if (result.rounds == 1) result.initial_cliques = c.size();
      result.times.clique_init_ms += timer.elapsed_ms();
    }
    const MergeStats stats = merge_loop(g, c, params, &result.times);
    result.merge_stats.merges += stats.merges;
    result.merge_stats.deletions += stats.deletions;
    result.merge_stats.adopted += stats.adopted;
    result.merge_stats.iterations += stats.iterations;

    if (clustering_conforms(g, c, params)) {
      result.clustering = std::move(c);
      result.conforming = true;
      return result;
    }
    const double score = round_score(g, c);
    if (!best || score < best_score) {
      best = c;
      best_score = score;
    }
  }
  result.clustering = std::move(*best);
  result.conforming = false;
  return result;
}

}  // namespace cbc
