// Command-line front end: cluster, generate, compare, stats, centrality, gn,
// bench.

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "cbc/cbc.h"
#include "cbc/centrality.h"
#include "cbc/cpu_timer.h"
#include "cbc/fwgen.h"
#include "cbc/girvan_newman.h"
#include "cbc/metrics.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNonConforming = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string input;
  std::string format = "edge";
  std::string out;
  std::string csv;
  unsigned threads = 0;
  bool timing = false;
  cbc::CbcParams params;

  // compare / stats
  std::string clusters_a;
  std::string clusters_b;

  // generate
  std::size_t nodes = 0;
  std::optional<std::size_t> edges;
  std::optional<double> density;
  std::size_t clusters = 1;
  double skew = 0.0;
  double assortativity = 1.0;
  std::uint64_t seed = 1;

  // gn
  std::size_t k = 0;

  // bench
  std::vector<std::size_t> sizes{1000, 2000, 4000};
  std::size_t edge_factor = 15;
  std::vector<double> assortativities{0.85};
  std::optional<std::size_t> bench_clusters;
  double bench_skew = 0.1;
  std::size_t repeats = 1;
};

cbc::GraphFormat parse_format(const std::string& name) {
  return name == "pajek" ? cbc::GraphFormat::kPajek : cbc::GraphFormat::kEdgeList;
}

cbc::Graph load(const Options& opt) {
  const cbc::LoadResult loaded = cbc::load_graph_file(opt.input, parse_format(opt.format));
  if (loaded.stats.dropped() > 0) {
    std::cerr << "note: dropped " << loaded.stats.self_loops << " self-loop(s) and "
              << loaded.stats.duplicates << " duplicate edge(s)\n";
  }
  return loaded.graph;
}

// Writes to --out when given, stdout otherwise.
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  fn(out);
  if (!out) throw std::runtime_error("write failed for " + path);
}

void print_timing(std::ostream& out, const cbc::PhaseTimes& t) {
  out << std::fixed << std::setprecision(1) << "cpu ms: centrality "
      << t.centrality_ms << ", clique init " << t.clique_init_ms << ", merging "
      << t.merging_ms << ", reassignment " << t.reassignment_ms << '\n'
      << std::defaultfloat;
}

int run_cluster(const Options& opt) {
  const cbc::Graph g = load(opt);
  const cbc::CbcResult result = cbc::cbc_cluster(g, opt.params, opt.threads);
  emit(opt.out, [&](std::ostream& out) { cbc::write_clustering(out, g, result.clustering); });
  // The cluster file owns stdout unless it went to a file.
  std::ostream& info = opt.out.empty() ? std::cerr : std::cout;
  const cbc::QualityReport report = cbc::quality_report(g, result.clustering);
  cbc::print_report(info, report);
  if (!opt.csv.empty()) {
    std::ofstream csv(opt.csv);
    if (!csv) throw std::runtime_error("cannot write " + opt.csv);
    cbc::write_report_csv(csv, report);
  }
  if (opt.timing) print_timing(info, result.times);
  if (!result.conforming) {
    std::cerr << "warning: no round produced a fully conforming clustering; "
                 "emitted the best one found\n";
    return kExitNonConforming;
  }
  return kExitOk;
}

int run_generate(const Options& opt) {
  if (opt.out.empty()) throw CLI::ValidationError("--out", "generate needs an output prefix");
  cbc::GenParams p;
  p.n_nodes = opt.nodes;
  p.edges = opt.edges;
  p.density = opt.density;
  p.n_clusters = opt.clusters;
  p.skew = opt.skew;
  p.assortativity = opt.assortativity;
  p.seed = opt.seed;
  const cbc::GeneratedGraph gen = cbc::generate(p);
  cbc::write_pair(gen.graph, gen.truth, opt.out);
  std::cout << "wrote " << opt.out << ".edges (" << gen.graph.num_nodes() << " nodes, "
            << gen.graph.num_edges() << " edges, " << gen.intra_edges << " intra) and "
            << opt.out << ".truth (" << gen.truth.size() << " clusters)\n";
  return kExitOk;
}

int run_compare(const Options& opt) {
  const cbc::Graph base = load(opt);
  std::ifstream in_a(opt.clusters_a);
  if (!in_a) throw std::runtime_error("cannot open " + opt.clusters_a);
  auto a = cbc::read_clustering_with_nodes(in_a, base);
  std::ifstream in_b(opt.clusters_b);
  if (!in_b) throw std::runtime_error("cannot open " + opt.clusters_b);
  auto b = cbc::read_clustering_with_nodes(in_b, a.graph);
  // Nodes named only by the second file extend the node set of the first.
  std::vector<std::vector<cbc::NodeId>> sets;
  for (const auto& cl : a.clustering.clusters()) sets.push_back(cl.members);
  const cbc::Clustering first(b.graph.num_nodes(), std::move(sets));
  std::cout << std::fixed << std::setprecision(6)
            << cbc::clustering_distance(first, b.clustering, b.graph) << '\n';
  return kExitOk;
}

int run_stats(const Options& opt) {
  const cbc::Graph base = load(opt);
  std::ifstream in(opt.clusters_a);
  if (!in) throw std::runtime_error("cannot open " + opt.clusters_a);
  const auto both = cbc::read_clustering_with_nodes(in, base);
  const cbc::QualityReport report = cbc::quality_report(both.graph, both.clustering);
  std::cout << both.graph.num_nodes() << " nodes, " << both.graph.num_edges()
            << " edges, " << both.clustering.size() << " clusters\n";
  cbc::print_report(std::cout, report);
  if (!opt.csv.empty()) {
    std::ofstream csv(opt.csv);
    if (!csv) throw std::runtime_error("cannot write " + opt.csv);
    cbc::write_report_csv(csv, report);
  }
  return kExitOk;
}

int run_centrality(const Options& opt) {
  const cbc::Graph g = load(opt);
  const cbc::CpuTimer timer;
  const cbc::CentralityScores cb = cbc::betweenness(g, opt.threads);
  const double ms = timer.elapsed_ms();
  std::vector<cbc::NodeId> order(g.num_nodes());
  std::iota(order.begin(), order.end(), cbc::NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](cbc::NodeId x, cbc::NodeId y) { return cb[x] > cb[y]; });
  emit(opt.out, [&](std::ostream& out) {
    out << std::setprecision(10);
    for (cbc::NodeId v : order) out << g.label(v) << '\t' << cb[v] << '\n';
  });
  if (opt.timing) std::cerr << "cpu ms: centrality " << ms << '\n';
  return kExitOk;
}

int run_gn(const Options& opt) {
  const cbc::Graph g = load(opt);
  const cbc::Clustering c = cbc::gn_cluster(g, opt.k);
  emit(opt.out, [&](std::ostream& out) { cbc::write_clustering(out, g, c); });
  cbc::print_report(opt.out.empty() ? std::cerr : std::cout, cbc::quality_report(g, c));
  return kExitOk;
}

std::size_t default_cluster_count(std::size_t n) {
  if (n < 1000) return 5;
  if (n < 10000) return 10;
  return 100;
}

int run_bench(const Options& opt) {
  emit(opt.out, [&](std::ostream& out) {
    out << "n,m,clusters,assortativity,t_centrality_ms,t_clustering_ms,t_total_ms,q_c,"
           "distance\n";
    for (std::size_t n : opt.sizes) {
      for (double a : opt.assortativities) {
        for (std::size_t r = 0; r < opt.repeats; ++r) {
          cbc::GenParams p;
          p.n_nodes = n;
          p.edges = opt.edge_factor * n;
          p.n_clusters = opt.bench_clusters.value_or(default_cluster_count(n));
          p.skew = opt.bench_skew;
          p.assortativity = a;
          p.seed = opt.seed + r;
          const cbc::GeneratedGraph gen = cbc::generate(p);
          const cbc::CpuTimer total;
          const cbc::CbcResult res = cbc::cbc_cluster(gen.graph, opt.params, opt.threads);
          const double t_total = total.elapsed_ms();
          const cbc::QualityReport report = cbc::quality_report(gen.graph, res.clustering);
          out << n << ',' << gen.graph.num_edges() << ',' << p.n_clusters << ',' << a
              << ',' << std::fixed << std::setprecision(3) << res.times.centrality_ms
              << ',' << res.times.clustering_ms() << ',' << t_total << ','
              << std::setprecision(6) << report.q_c << ','
              << cbc::clustering_distance(res.clustering, gen.truth, gen.graph) << '\n'
              << std::defaultfloat;
          out.flush();
        }
      }
    }
  });
  return kExitOk;
}

void add_cbc_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--s", opt.params.s, "Community factor: accept d_out/d_in < s")
      ->capture_default_str();
  cmd->add_option("--max-cluster-frac", opt.params.max_cluster_frac,
                  "Largest cluster as a fraction of the node count")
      ->capture_default_str();
  cmd->add_option("--min-cluster-size", opt.params.min_cluster_size, "Smallest cluster")
      ->capture_default_str();
  cmd->add_flag("--minimize-orphans", opt.params.minimize_orphans,
                "Adopt orphan nodes into neighbouring clusters");
  cmd->add_flag("--flake-strict", opt.params.flake_strict,
                "Require more inside than outside links for every member");
  cmd->add_option("--max-retries", opt.params.max_retries, "Clique-seeding rounds")
      ->capture_default_str();
}

void add_input(CLI::App* cmd, Options& opt) {
  cmd->add_option("graph", opt.input, "Graph file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--format", opt.format, "Graph file format")
      ->check(CLI::IsMember({"edge", "pajek"}))
      ->capture_default_str();
}

void add_threads(CLI::App* cmd, Options& opt) {
  cmd->add_option("--threads", opt.threads, "Centrality worker threads (0 = all cores)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Overlapping graph clustering driven by betweenness centrality"};
  app.require_subcommand(1);
  Options opt;

  auto* cluster = app.add_subcommand("cluster", "Cluster a graph");
  add_input(cluster, opt);
  add_cbc_flags(cluster, opt);
  add_threads(cluster, opt);
  cluster->add_option("--out", opt.out, "Cluster file (default stdout)");
  cluster->add_option("--csv", opt.csv, "Per-cluster table as CSV");
  cluster->add_flag("--timing", opt.timing, "Report per-phase CPU time");

  auto* generate = app.add_subcommand("generate", "Generate a planted-partition graph");
  generate->add_option("--nodes", opt.nodes, "Node count")->required();
  auto* edges_opt = generate->add_option("--edges", opt.edges, "Edge count");
  auto* density_opt =
      generate->add_option("--density", opt.density, "Fraction of the complete graph");
  edges_opt->excludes(density_opt);
  generate->add_option("--clusters", opt.clusters, "Planted clusters")->capture_default_str();
  generate->add_option("--skew", opt.skew, "Cluster size imbalance")->capture_default_str();
  generate->add_option("--assortativity", opt.assortativity, "Intra-cluster edge fraction")
      ->capture_default_str();
  generate->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
  generate->add_option("--out", opt.out, "Output prefix for .edges and .truth")->required();

  auto* compare = app.add_subcommand("compare", "Distance between two clusterings");
  add_input(compare, opt);
  compare->add_option("a", opt.clusters_a, "First cluster file")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("b", opt.clusters_b, "Second cluster file")
      ->required()
      ->check(CLI::ExistingFile);

  auto* stats = app.add_subcommand("stats", "Quality report for a clustering");
  add_input(stats, opt);
  stats->add_option("clusters", opt.clusters_a, "Cluster file")
      ->required()
      ->check(CLI::ExistingFile);
  stats->add_option("--csv", opt.csv, "Per-cluster table as CSV");

  auto* centrality = app.add_subcommand("centrality", "Node betweenness, highest first");
  add_input(centrality, opt);
  add_threads(centrality, opt);
  centrality->add_option("--out", opt.out, "Output file (default stdout)");
  centrality->add_flag("--timing", opt.timing, "Report CPU time");

  auto* gn = app.add_subcommand("gn", "Divisive edge-betweenness clustering");
  add_input(gn, opt);
  gn->add_option("--k", opt.k, "Target component count")->required();
  gn->add_option("--out", opt.out, "Cluster file (default stdout)");

  auto* bench = app.add_subcommand("bench", "Timing and quality sweep as CSV");
  bench->add_option("--sizes", opt.sizes, "Node counts")->capture_default_str();
  bench->add_option("--edge-factor", opt.edge_factor, "Edges per node")->capture_default_str();
  bench->add_option("--assortativity", opt.assortativities, "Assortativity values")
      ->capture_default_str();
  bench->add_option("--clusters", opt.bench_clusters,
                    "Planted clusters (default 5 below 1000 nodes, 10 below 10000, "
                    "else 100)");
  bench->add_option("--skew", opt.bench_skew, "Cluster size imbalance")->capture_default_str();
  bench->add_option("--seed", opt.seed, "First seed")->capture_default_str();
  bench->add_option("--repeats", opt.repeats, "Seeds per configuration")
      ->capture_default_str();
  bench->add_option("--out", opt.out, "CSV file (default stdout)");
  add_cbc_flags(bench, opt);
  add_threads(bench, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    opt.params.validate();
    if (cluster->parsed()) return run_cluster(opt);
    if (generate->parsed()) return run_generate(opt);
    if (compare->parsed()) return run_compare(opt);
    if (stats->parsed()) return run_stats(opt);
    if (centrality->parsed()) return run_centrality(opt);
    if (gn->parsed()) return run_gn(opt);
    if (bench->parsed()) return run_bench(opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const cbc::ParseError& e) {
    std::cerr << "error: " << opt.input << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
