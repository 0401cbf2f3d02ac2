#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace liftsub {

/// Raised when a serialized object is malformed. `field()` names the
/// offending field using a dotted path such as "matchings.0-2".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Raised when an operation is called outside its documented domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an exact computation would exceed its configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A lift vertex addressed as (fiber, layer).
struct VertexId {
  std::uint32_t fiber = 0;
  std::uint32_t layer = 0;

  friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

std::ostream& operator<<(std::ostream& os, VertexId v);
std::string to_string(VertexId v);

using BaseEdge = std::pair<std::uint32_t, std::uint32_t>;

/// Undirected simple graph that gets lifted. Edges are stored canonically:
/// i < j, sorted, no duplicates.
class BaseGraph {
 public:
  struct Incidence {
    std::uint32_t neighbor;
    std::uint32_t edge;  // index into edges()
  };

  BaseGraph() = default;
  BaseGraph(std::size_t num_vertices, std::vector<BaseEdge> edges);

  static BaseGraph complete(std::size_t n);

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<BaseEdge>& edges() const { return edges_; }
  std::optional<std::uint32_t> edge_index(std::uint32_t i, std::uint32_t j) const;
  std::span<const Incidence> incident(std::uint32_t v) const {
    return {incidence_.data() + offsets_[v], incidence_.data() + offsets_[v + 1]};
  }
  std::size_t degree(std::uint32_t v) const { return offsets_[v + 1] - offsets_[v]; }
  bool is_complete() const { return edges_.size() == n_ * (n_ - (n_ > 0 ? 1 : 0)) / 2; }

  friend bool operator==(const BaseGraph& a, const BaseGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<BaseEdge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incidence> incidence_;
};

/// An ell-lift of a base graph. Immutable after construction.
///
/// For each base edge (i, j) with i < j the lift stores a permutation of
/// [0, ell) that sends layer a of fiber i to its matched layer in fiber j.
class LiftGraph {
 public:
  LiftGraph() = default;
  LiftGraph(BaseGraph base, std::size_t ell, std::vector<std::vector<std::uint32_t>> matchings);

  const BaseGraph& base() const { return base_; }
  std::size_t ell() const { return ell_; }
  std::size_t num_fibers() const { return base_.num_vertices(); }
  std::size_t num_vertices() const { return base_.num_vertices() * ell_; }
  std::size_t num_edges() const { return base_.num_edges() * ell_; }

  bool contains(VertexId v) const { return v.fiber < num_fibers() && v.layer < ell_; }

  /// Dense slot in [0, num_vertices()) for array-backed bookkeeping.
  std::size_t slot(VertexId v) const { return std::size_t{v.fiber} * ell_ + v.layer; }
  VertexId vertex_at(std::size_t slot) const {
    return {static_cast<std::uint32_t>(slot / ell_), static_cast<std::uint32_t>(slot % ell_)};
  }

  /// Permutation carried by base edge `edge` (index into base().edges()).
  std::span<const std::uint32_t> matching(std::size_t edge) const {
    return {forward_.data() + edge * ell_, ell_};
  }

  /// The unique neighbor of `v` inside `fiber`, if the fibers are adjacent.
  std::optional<VertexId> neighbor_in(VertexId v, std::uint32_t fiber) const;

  /// Neighbors of v ordered by fiber. Throws std::out_of_range for bad v.
  std::vector<VertexId> neighbors(VertexId v) const;

  template <class F>
  void for_each_neighbor(VertexId v, F&& f) const {
    for (const auto& inc : base_.incident(v.fiber)) f(VertexId{inc.neighbor, partner_layer(v, inc)});
  }

  std::size_t degree(VertexId v) const { return base_.degree(v.fiber); }

  /// Symmetric adjacency test; false for same-fiber pairs and out-of-range input.
  bool is_edge(VertexId u, VertexId v) const;

  friend bool operator==(const LiftGraph& a, const LiftGraph& b) {
    return a.ell_ == b.ell_ && a.base_ == b.base_ && a.forward_ == b.forward_;
  }

 private:
  std::uint32_t partner_layer(VertexId v, const BaseGraph::Incidence& inc) const {
    const std::size_t off = std::size_t{inc.edge} * ell_ + v.layer;
    return v.fiber < inc.neighbor ? forward_[off] : inverse_[off];
  }

  BaseGraph base_;
  std::size_t ell_ = 0;
  std::vector<std::uint32_t> forward_;
  std::vector<std::uint32_t> inverse_;
};

/// A set of fibers; restricts an operation to the induced sub-lift on them.
class FiberSet {
 public:
  FiberSet() = default;
  static FiberSet all(std::size_t num_fibers) { return FiberSet(num_fibers, true); }
  static FiberSet none(std::size_t num_fibers) { return FiberSet(num_fibers, false); }
  FiberSet(std::size_t num_fibers, std::span<const std::uint32_t> members);

  bool contains(std::uint32_t fiber) const { return fiber < in_.size() && in_[fiber]; }
  void insert(std::uint32_t fiber);
  void erase(std::uint32_t fiber);
  std::size_t size() const { return count_; }
  std::size_t universe() const { return in_.size(); }
  std::vector<std::uint32_t> members() const;

 private:
  FiberSet(std::size_t n, bool value) : in_(n, value), count_(value ? n : 0) {}
  std::vector<char> in_;
  std::size_t count_ = 0;
};

/// K_n as a base graph. Throws PreconditionError for n == 0.
BaseGraph complete_base(std::size_t n);

/// Uniform random lift: one independent uniform permutation per base edge.
/// Each edge draws from its own substream keyed by (seed, i, j).
LiftGraph sample_uniform_lift(const BaseGraph& base, std::size_t ell, std::uint64_t seed);

/// Canonical text form: object with fields n, ell, base_edges, matchings.
std::string serialize_lift(const LiftGraph& g);
LiftGraph deserialize_lift(std::string_view text);

LiftGraph read_lift_file(const std::string& path);
void write_lift_file(const std::string& path, const LiftGraph& g);

/// Helpers shared by the text formats: "i-j" keys and [fiber, layer] pairs.
std::string pair_key(std::size_t i, std::size_t j);
std::optional<std::pair<std::size_t, std::size_t>> parse_pair_key(std::string_view key);

}  // namespace liftsub
