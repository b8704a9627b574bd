#ifndef CBC_METRICS_H_
#define CBC_METRICS_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "cbc/clustering.h"
#include "cbc/graph.h"

namespace cbc {

class UndefinedRatioError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// d_out / d_in with the internal-edge count taken once per edge. A set with
// no edges at all (an isolated component) has ratio 0; d_in == 0 with
// d_out > 0 throws UndefinedRatioError.
double cut_ratio(const CutSizes& cut);

// d_out(C) / d_in(C) < s.
bool is_community(const Graph& g, std::span<const NodeId> members, double s);

// Mean cut ratio over the clusters; 0 for an empty clustering.
double q_c(const Graph& g, const Clustering& c);

struct DrateResult {
  double value = 0.0;
  // False when no node belongs to a cluster; value is then 0.
  bool defined = false;
};

// Average number of memberships per clustered node.
DrateResult drate(const Clustering& c);

// Fraction of the clusters holding n1 that also hold n2; 0 if n1 is an orphan.
double similarity(NodeId n1, NodeId n2, const Clustering& c);

// Mean |S_A(n1, n2) - S_B(n1, n2)| over ordered pairs n1 != n2. Throws
// std::invalid_argument when the clusterings or graph disagree on node count.
double clustering_distance(const Clustering& a, const Clustering& b,
                           const Graph& g);

struct ClusterRow {
  std::size_t size = 0;
  std::size_t d_in = 0;
  std::size_t d_out = 0;
  double ratio = 0.0;  // +inf when undefined
};

struct QualityReport {
  double q_c = 0.0;
  // False when some cluster has d_in == 0 < d_out, leaving q_c undefined.
  bool q_c_defined = true;
  DrateResult drate;
  std::size_t orphan_count = 0;
  std::vector<ClusterRow> rows;
};

QualityReport quality_report(const Graph& g, const Clustering& c);

// Aligned text table: summary line then one row per cluster.
void print_report(std::ostream& out, const QualityReport& report);
void write_report_csv(std::ostream& out, const QualityReport& report);

}  // namespace cbc

#endif  // CBC_METRICS_H_
