#include "cbc/graph.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace cbc {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::optional<long long> parse_int(std::string_view s) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<char> membership_mask(const Graph& g,
                                  std::span<const NodeId> members) {
  std::vector<char> mask(g.num_nodes(), 0);
  for (NodeId v : members) {
    if (!g.contains(v)) {
      throw std::out_of_range("node " + std::to_string(v) +
                              " is not in the graph");
    }
    mask[v] = 1;
  }
  return mask;
}

}  // namespace

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (!contains(u) || !contains(v)) return false;
  const auto adj = neighbors(u);
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::optional<NodeId> Graph::find(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

Graph Graph::induced_subgraph(std::span<const NodeId> nodes) const {
  constexpr NodeId kAbsent = static_cast<NodeId>(-1);
  std::vector<NodeId> local(num_nodes(), kAbsent);
  GraphBuilder builder;
  for (NodeId v : nodes) local[v] = builder.add_node(labels_[v]);
  for (NodeId v : nodes) {
    for (NodeId w : neighbors(v)) {
      if (v < w && local[w] != kAbsent) builder.add_edge(local[v], local[w]);
    }
  }
  return std::move(builder).build();
}

bool Graph::same_structure(const Graph& other) const {
  if (num_nodes() != other.num_nodes() || num_edges() != other.num_edges()) {
    return false;
  }
  for (NodeId v = 0; v < num_nodes(); ++v) {
    const auto w = other.find(labels_[v]);
    if (!w || other.degree(*w) != degree(v)) return false;
    for (NodeId x : neighbors(v)) {
      const auto y = other.find(labels_[x]);
      if (!y || !other.has_edge(*w, *y)) return false;
    }
  }
  return true;
}

NodeId GraphBuilder::add_node(std::string_view label) {
  auto [it, inserted] =
      index_.try_emplace(std::string(label), static_cast<NodeId>(labels_.size()));
  if (inserted) labels_.emplace_back(label);
  return it->second;
}

void GraphBuilder::add_edge(NodeId u, NodeId v) {
  if (u == v) {
    ++self_loops_;
    return;
  }
  if (u > v) std::swap(u, v);
  edges_.push_back({u, v});
}

Graph GraphBuilder::build(BuildStats* stats) && {
  std::sort(edges_.begin(), edges_.end());
  const auto unique_end = std::unique(edges_.begin(), edges_.end());
  const std::size_t duplicates =
      static_cast<std::size_t>(edges_.end() - unique_end);
  edges_.erase(unique_end, edges_.end());

  Graph g;
  const std::size_t n = labels_.size();
  g.offsets_.assign(n + 1, 0);
  for (const Edge& e : edges_) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.neighbors_.resize(2 * edges_.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges are sorted by (u, v), so filling both directions in this order
  // leaves every adjacency list sorted.
  for (const Edge& e : edges_) g.neighbors_[cursor[e.u]++] = e.v;
  for (const Edge& e : edges_) g.neighbors_[cursor[e.v]++] = e.u;
  for (NodeId v = 0; v < n; ++v) {
    std::sort(g.neighbors_.begin() + g.offsets_[v],
              g.neighbors_.begin() + g.offsets_[v + 1]);
  }
  g.labels_ = std::move(labels_);
  g.index_ = std::move(index_);
  if (stats != nullptr) {
    stats->self_loops = self_loops_;
    stats->duplicates = duplicates;
  }
  return g;
}

LoadResult load_edge_list(std::istream& in) {
  GraphBuilder builder;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto tokens = split_ws(body);
    if (tokens.size() != 2) {
      throw ParseError("expected two node labels, got " +
                           std::to_string(tokens.size()) + " fields",
                       line_no);
    }
    builder.add_edge(tokens[0], tokens[1]);
  }
  if (builder.num_nodes() == 0) throw ParseError("empty edge list", 0);
  LoadResult result;
  result.graph = std::move(builder).build(&result.stats);
  return result;
}

LoadResult load_pajek_net(std::istream& in) {
  enum class Section { kNone, kVertices, kPairs, kLists, kOther };
  Section section = Section::kNone;
  GraphBuilder builder;
  std::vector<std::string> vertex_labels;
  bool have_vertices = false;
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  auto vertex_index = [&](std::string_view token, std::size_t line_no) {
    const auto value = parse_int(token);
    if (!value) throw ParseError("bad vertex index '" + std::string(token) + "'", line_no);
    if (*value < 1 || static_cast<std::size_t>(*value) > n) {
      throw ParseError("vertex index " + std::string(token) + " out of range 1.." +
                           std::to_string(n),
                       line_no);
    }
    return static_cast<std::size_t>(*value - 1);
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '%') continue;
    if (body.front() == '*') {
      const auto tokens = split_ws(body);
      const std::string key = lower(tokens[0]);
      if (key == "*vertices") {
        if (tokens.size() < 2) throw ParseError("*Vertices without a count", line_no);
        const auto count = parse_int(tokens[1]);
        if (!count || *count < 0) throw ParseError("bad vertex count", line_no);
        n = static_cast<std::size_t>(*count);
        vertex_labels.assign(n, {});
        for (std::size_t i = 0; i < n; ++i) vertex_labels[i] = std::to_string(i + 1);
        have_vertices = true;
        section = Section::kVertices;
      } else if (key == "*edges" || key == "*arcs") {
        if (!have_vertices) throw ParseError("missing *Vertices header", line_no);
        section = Section::kPairs;
      } else if (key == "*edgeslist" || key == "*arcslist") {
        if (!have_vertices) throw ParseError("missing *Vertices header", line_no);
        section = Section::kLists;
      } else {
        section = Section::kOther;
      }
      continue;
    }
    switch (section) {
      case Section::kNone:
        throw ParseError("missing *Vertices header", line_no);
      case Section::kVertices: {
        const auto tokens = split_ws(body);
        const std::size_t idx = vertex_index(tokens[0], line_no);
        const auto open = body.find('"');
        if (open != std::string_view::npos) {
          const auto close = body.find('"', open + 1);
          if (close == std::string_view::npos) throw ParseError("unterminated label", line_no);
          vertex_labels[idx] = std::string(body.substr(open + 1, close - open - 1));
        } else if (tokens.size() >= 2) {
          vertex_labels[idx] = std::string(tokens[1]);
        }
        break;
      }
      case Section::kPairs: {
        const auto tokens = split_ws(body);
        if (tokens.size() < 2) throw ParseError("expected a vertex pair", line_no);
        pairs.emplace_back(vertex_index(tokens[0], line_no),
                           vertex_index(tokens[1], line_no));
        break;
      }
      case Section::kLists: {
        const auto tokens = split_ws(body);
        const std::size_t from = vertex_index(tokens[0], line_no);
        for (std::size_t i = 1; i < tokens.size(); ++i) {
          pairs.emplace_back(from, vertex_index(tokens[i], line_no));
        }
        break;
      }
      case Section::kOther:
        break;
    }
  }
  if (!have_vertices) throw ParseError("missing *Vertices header", 0);

  for (const auto& label : vertex_labels) {
    if (builder.add_node(label) + 1 != builder.num_nodes()) {
      throw ParseError("duplicate vertex label '" + label + "'", 0);
    }
  }
  for (const auto& [a, b] : pairs) {
    builder.add_edge(static_cast<NodeId>(a), static_cast<NodeId>(b));
  }
  LoadResult result;
  result.graph = std::move(builder).build(&result.stats);
  return result;
}

LoadResult load_graph_file(const std::string& path, GraphFormat format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return format == GraphFormat::kPajek ? load_pajek_net(in) : load_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (const Edge& e : g.edges()) {
    out << g.label(e.u) << ' ' << g.label(e.v) << '\n';
  }
}

DegreeSplit node_degree_split(const Graph& g, NodeId i,
                              std::span<const NodeId> members) {
  if (!g.contains(i)) {
    throw std::out_of_range("node " + std::to_string(i) + " is not in the graph");
  }
  const auto mask = membership_mask(g, members);
  DegreeSplit split;
  for (NodeId w : g.neighbors(i)) {
    if (mask[w]) {
      ++split.d_in;
    } else {
      ++split.d_out;
    }
  }
  return split;
}

CutSizes cluster_cut_sizes(const Graph& g, std::span<const NodeId> members) {
  const auto mask = membership_mask(g, members);
  CutSizes cut;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (!mask[v]) continue;
    for (NodeId w : g.neighbors(v)) {
      if (!mask[w]) {
        ++cut.d_out;
      } else if (v < w) {
        ++cut.d_in;
      }
    }
  }
  return cut;
}

std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
  std::vector<std::vector<NodeId>> out;
  std::vector<char> seen(g.num_nodes(), 0);
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    if (seen[s]) continue;
    std::vector<NodeId> comp;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (NodeId w : g.neighbors(v)) {
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace cbc
