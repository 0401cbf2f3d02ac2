#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "liftsub/lift.hpp"

namespace liftsub {

/// Plain undirected simple graph on vertices [0, n). Used by the exact
/// oracles, which work on arbitrary graphs rather than lifts.
class SimpleGraph {
 public:
  SimpleGraph() = default;
  explicit SimpleGraph(std::size_t n) : adj_(n) {}
  SimpleGraph(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

  std::size_t num_vertices() const { return adj_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  bool contains(std::uint32_t v) const { return v < adj_.size(); }

  /// Adds u-v; loops and duplicates are ignored. Returns true if inserted.
  bool add_edge(std::uint32_t u, std::uint32_t v);
  bool is_edge(std::uint32_t u, std::uint32_t v) const;
  std::span<const std::uint32_t> neighbors(std::uint32_t v) const { return adj_[v]; }
  std::size_t degree(std::uint32_t v) const { return adj_[v].size(); }
  std::size_t max_degree() const;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const;

  static SimpleGraph complete(std::size_t n);
  static SimpleGraph cycle(std::size_t n);
  static SimpleGraph petersen();

 private:
  std::vector<std::vector<std::uint32_t>> adj_;  // sorted
  std::size_t num_edges_ = 0;
};

/// Flattens a lift; vertex (f, a) becomes slot f * ell + a.
SimpleGraph to_simple_graph(const LiftGraph& g);

/// Edge-list text: one "u v" pair per line, 0-indexed. Blank lines and
/// lines starting with '#' are skipped. A "# n <count>" comment fixes the
/// vertex count so trailing isolated vertices survive a round trip.
SimpleGraph parse_edge_list(std::string_view text);
std::string format_edge_list(const SimpleGraph& g);

/// Reads either a lift file (leading '{') or an edge-list file.
SimpleGraph read_graph_file(const std::string& path);

}  // namespace liftsub
