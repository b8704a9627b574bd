#include "cbc/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace cbc {

double cut_ratio(const CutSizes& cut) {
  if (cut.d_in == 0) {
    if (cut.d_out == 0) return 0.0;
    throw UndefinedRatioError("cluster has external links but no internal ones");
  }
  return static_cast<double>(cut.d_out) / static_cast<double>(cut.d_in);
}

bool is_community(const Graph& g, std::span<const NodeId> members, double s) {
  const CutSizes cut = cluster_cut_sizes(g, members);
  if (cut.d_in == 0) return cut.d_out == 0;
  return static_cast<double>(cut.d_out) < s * static_cast<double>(cut.d_in);
}

double q_c(const Graph& g, const Clustering& c) {
  if (c.empty()) return 0.0;
  double sum = 0.0;
  for (const Cluster& cluster : c.clusters()) {
    sum += cut_ratio(cluster_cut_sizes(g, cluster.members));
  }
  return sum / static_cast<double>(c.size());
}

DrateResult drate(const Clustering& c) {
  std::vector<std::size_t> count(c.num_nodes(), 0);
  std::size_t memberships = 0;
  for (const Cluster& cluster : c.clusters()) {
    for (NodeId v : cluster.members) ++count[v];
    memberships += cluster.size();
  }
  std::size_t clustered = 0;
  for (std::size_t k : count) clustered += k > 0 ? 1 : 0;
  if (clustered == 0) return {};
  return {static_cast<double>(memberships) / static_cast<double>(clustered), true};
}

double similarity(NodeId n1, NodeId n2, const Clustering& c) {
  std::size_t holding = 0;
  std::size_t shared = 0;
  for (const Cluster& cluster : c.clusters()) {
    if (!cluster.contains(n1)) continue;
    ++holding;
    if (cluster.contains(n2)) ++shared;
  }
  if (holding == 0) return 0.0;
  return static_cast<double>(shared) / static_cast<double>(holding);
}

namespace {

// Row view of S(n1, .) for one clustering: shared[n2] counts the clusters of
// n1 that hold n2; only `touched` entries are nonzero.
class SimilarityRow {
 public:
  SimilarityRow(const Clustering& c)
      : clustering_(c), memberships_(c.memberships()), shared_(c.num_nodes(), 0) {}

  void load(NodeId n1) {
    for (NodeId v : touched_) shared_[v] = 0;
    touched_.clear();
    holding_ = memberships_[n1].size();
    for (std::size_t ci : memberships_[n1]) {
      for (NodeId v : clustering_[ci].members) {
        if (shared_[v]++ == 0) touched_.push_back(v);
      }
    }
  }

  double at(NodeId n2) const {
    return holding_ == 0 ? 0.0
                         : static_cast<double>(shared_[n2]) /
                               static_cast<double>(holding_);
  }
  const std::vector<NodeId>& touched() const { return touched_; }

 private:
  const Clustering& clustering_;
  std::vector<std::vector<std::size_t>> memberships_;
  std::vector<std::size_t> shared_;
  std::vector<NodeId> touched_;
  std::size_t holding_ = 0;
};

}  // namespace

double clustering_distance(const Clustering& a, const Clustering& b,
                           const Graph& g) {
  const std::size_t n = g.num_nodes();
  if (a.num_nodes() != n || b.num_nodes() != n) {
    throw std::invalid_argument("clusterings do not cover the graph's node set");
  }
  if (n < 2) return 0.0;

  SimilarityRow row_a(a);
  SimilarityRow row_b(b);
  std::vector<char> seen(n, 0);
  std::vector<NodeId> pairs;
  double total = 0.0;
  for (NodeId n1 = 0; n1 < n; ++n1) {
    row_a.load(n1);
    row_b.load(n1);
    // Pairs untouched by both rows have S = 0 on both sides. Summing in node
    // order keeps D(A, B) and D(B, A) bit-identical.
    pairs.clear();
    for (const auto* touched : {&row_a.touched(), &row_b.touched()}) {
      for (NodeId n2 : *touched) {
        if (n2 == n1 || seen[n2]) continue;
        seen[n2] = 1;
        pairs.push_back(n2);
      }
    }
    std::sort(pairs.begin(), pairs.end());
    double row_sum = 0.0;
    for (NodeId n2 : pairs) {
      seen[n2] = 0;
      row_sum += std::abs(row_a.at(n2) - row_b.at(n2));
    }
    total += row_sum;
  }
  return total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

QualityReport quality_report(const Graph& g, const Clustering& c) {
  QualityReport report;
  double sum = 0.0;
  for (const Cluster& cluster : c.clusters()) {
    const CutSizes cut = cluster_cut_sizes(g, cluster.members);
    ClusterRow row{cluster.size(), cut.d_in, cut.d_out,
                   std::numeric_limits<double>::infinity()};
    if (cut.d_in > 0 || cut.d_out == 0) {
      row.ratio = cut_ratio(cut);
      sum += row.ratio;
    } else {
      report.q_c_defined = false;
    }
    report.rows.push_back(row);
  }
  if (report.q_c_defined && !c.empty()) {
    report.q_c = sum / static_cast<double>(c.size());
  }
  report.drate = drate(c);
  report.orphan_count = c.orphan_count();
  return report;
}

void print_report(std::ostream& out, const QualityReport& report) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "clusters: %zu  Q_C: %s  Drate: %.2f  orphans: %zu\n",
                report.rows.size(),
                report.q_c_defined ? std::to_string(report.q_c).c_str()
                                   : "undefined",
                report.drate.value, report.orphan_count);
  out << buf;
  std::snprintf(buf, sizeof(buf), "%8s %10s %10s %10s %12s\n", "cluster",
                "nodes", "C_in", "C_out", "C_out/C_in");
  out << buf;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const ClusterRow& r = report.rows[i];
    std::snprintf(buf, sizeof(buf), "%8zu %10zu %10zu %10zu %12.6f\n", i,
                  r.size, r.d_in, r.d_out, r.ratio);
    out << buf;
  }
}

void write_report_csv(std::ostream& out, const QualityReport& report) {
  out << "cluster,nodes,c_in,c_out,ratio\n";
  char buf[32];
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const ClusterRow& r = report.rows[i];
    std::snprintf(buf, sizeof(buf), "%.9g", r.ratio);
    out << i << ',' << r.size << ',' << r.d_in << ',' << r.d_out << ',' << buf
        << '\n';
  }
}

}  // namespace cbc
