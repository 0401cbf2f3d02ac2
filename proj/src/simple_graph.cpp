#include "liftsub/simple_graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace liftsub {

SimpleGraph::SimpleGraph(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges)
    : adj_(n) {
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw PreconditionError("edge endpoint out of range");
    add_edge(u, v);
  }
}

bool SimpleGraph::add_edge(std::uint32_t u, std::uint32_t v) {
  if (u == v || is_edge(u, v)) return false;
  adj_[u].insert(std::lower_bound(adj_[u].begin(), adj_[u].end(), v), v);
  adj_[v].insert(std::lower_bound(adj_[v].begin(), adj_[v].end(), u), u);
  ++num_edges_;
  return true;
}

bool SimpleGraph::is_edge(std::uint32_t u, std::uint32_t v) const {
  if (u >= adj_.size() || v >= adj_.size()) return false;
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

std::size_t SimpleGraph::max_degree() const {
  std::size_t d = 0;
  for (const auto& a : adj_) d = std::max(d, a.size());
  return d;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> SimpleGraph::edges() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  out.reserve(num_edges_);
  for (std::uint32_t u = 0; u < adj_.size(); ++u)
    for (auto v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

SimpleGraph SimpleGraph::complete(std::size_t n) {
  SimpleGraph g(n);
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

SimpleGraph SimpleGraph::cycle(std::size_t n) {
  SimpleGraph g(n);
  for (std::uint32_t u = 0; u < n; ++u) g.add_edge(u, static_cast<std::uint32_t>((u + 1) % n));
  return g;
}

SimpleGraph SimpleGraph::petersen() {
  SimpleGraph g(10);
  for (std::uint32_t i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);          // outer cycle
    g.add_edge(i, i + 5);                // spokes
    g.add_edge(i + 5, (i + 2) % 5 + 5);  // inner pentagram
  }
  return g;
}

SimpleGraph to_simple_graph(const LiftGraph& g) {
  SimpleGraph out(g.num_vertices());
  for (std::size_t e = 0; e < g.base().num_edges(); ++e) {
    const auto [i, j] = g.base().edges()[e];
    auto perm = g.matching(e);
    for (std::uint32_t a = 0; a < g.ell(); ++a)
      out.add_edge(static_cast<std::uint32_t>(g.slot({i, a})), static_cast<std::uint32_t>(g.slot({j, perm[a]})));
  }
  return out;
}

SimpleGraph parse_edge_list(std::string_view text) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::size_t n = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream c(line.substr(first + 1));
      std::string tag;
      std::size_t count = 0;
      if (c >> tag && tag == "n" && c >> count) n = std::max(n, count);
      continue;
    }
    std::istringstream ls(line);
    long long u = -1, v = -1;
    std::string rest;
    if (!(ls >> u >> v) || u < 0 || v < 0 || (ls >> rest))
      throw ParseError("line " + std::to_string(lineno), "expected two non-negative vertex indices");
    edges.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
    n = std::max<std::size_t>(n, static_cast<std::size_t>(std::max(u, v)) + 1);
  }
  return SimpleGraph(n, edges);
}

std::string format_edge_list(const SimpleGraph& g) {
  std::ostringstream out;
  out << "# n " << g.num_vertices() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

SimpleGraph read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return to_simple_graph(deserialize_lift(text));
  return parse_edge_list(text);
}

}  // namespace liftsub
