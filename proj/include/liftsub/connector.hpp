#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "liftsub/lift.hpp"

namespace liftsub {

/// (D, m) of the extendability condition. D >= 3, m >= 1.
struct ExtendabilityParams {
  std::size_t D = 3;
  std::size_t m = 1;

  ExtendabilityParams() = default;
  ExtendabilityParams(std::size_t d, std::size_t m_);

  /// (n^0.99, 5 ell ln n), rounded to integers and clamped to the domain.
  static ExtendabilityParams asymptotic_defaults(std::size_t n, std::size_t ell);

  /// 3 * ceil(log(2m) / log(D - 1)).
  std::size_t path_length_bound() const;

  friend bool operator==(const ExtendabilityParams&, const ExtendabilityParams&) = default;
};

using LiftEdge = std::pair<VertexId, VertexId>;  // first < second

/// The growing subgraph S inside a host sub-lift, with S-degrees.
/// Invariants: degrees match the edge set, max S-degree <= D, every edge
/// endpoint is a vertex of S.
class EmbeddingState {
 public:
  EmbeddingState(const LiftGraph& g, ExtendabilityParams params, FiberSet host = {});

  const ExtendabilityParams& params() const { return params_; }
  const FiberSet& host() const { return host_; }
  bool in_host(VertexId v) const { return v.fiber < num_fibers_ && v.layer < ell_ && host_.contains(v.fiber); }

  bool contains(VertexId v) const { return in_host(v) && in_s_[slot(v)]; }
  std::size_t s_degree(VertexId v) const { return contains(v) ? degree_[slot(v)] : 0; }
  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t num_edges() const { return edges_.size(); }

  /// Adds an isolated vertex (no-op if present).
  void add_vertex(VertexId v);
  /// Adds the lift edge u-v, inserting missing endpoints. Throws
  /// PreconditionError if u-v is not a host edge, is already present, or
  /// would push an S-degree above D.
  void add_edge(const LiftGraph& g, VertexId u, VertexId v);

  std::vector<VertexId> vertices() const;
  const std::set<LiftEdge>& edges() const { return edges_; }

  /// Recomputes degrees from edges and checks the invariants; throws
  /// std::logic_error describing the first breach.
  void check_invariants() const;

  std::string serialize() const;
  static EmbeddingState deserialize(const LiftGraph& g, std::string_view text);

  friend bool operator==(const EmbeddingState& a, const EmbeddingState& b) {
    return a.params_ == b.params_ && a.in_s_ == b.in_s_ && a.degree_ == b.degree_ && a.edges_ == b.edges_ &&
           a.host_.members() == b.host_.members();
  }

 private:
  std::size_t slot(VertexId v) const { return std::size_t{v.fiber} * ell_ + v.layer; }

  ExtendabilityParams params_;
  FiberSet host_;
  std::size_t num_fibers_ = 0;
  std::size_t ell_ = 0;
  std::vector<char> in_s_;
  std::vector<std::uint32_t> degree_;
  std::set<LiftEdge> edges_;
  std::size_t num_vertices_ = 0;
};

struct PathResult {
  std::vector<VertexId> path;  // u = p0, ..., pk = v
  std::size_t length() const { return path.empty() ? 0 : path.size() - 1; }
};

/// No u-v path of admissible length avoids S inside the host.
class NoPathWithinBudget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Routes a shortest u-v path whose internal vertices lie in the host and
/// outside S, by bidirectional breadth-first search. Ties go to the
/// smallest (fiber, layer) meeting vertex unless `tie_seed` is given, in
/// which case neighbour order and tie choice are randomized.
///
/// On success S absorbs the path. On failure S is untouched.
/// max_len == 0 selects params().path_length_bound().
PathResult connect(const LiftGraph& g, EmbeddingState& s, VertexId u, VertexId v, std::size_t max_len = 0,
                   std::optional<std::uint64_t> tie_seed = std::nullopt);

struct RetryPolicy {
  std::size_t attempts = 3;
  std::uint64_t seed = 0;
};

struct BatchResult {
  std::vector<std::optional<PathResult>> paths;  // aligned with the input pairs
  std::vector<std::size_t> failed;               // indices of unrouted pairs
  std::vector<std::string> failure_reasons;      // aligned with failed
  std::size_t attempts_used = 0;

  bool ok() const { return failed.empty(); }
};

/// Connects every pair with pairwise internally disjoint paths. The first
/// attempt routes pairs in input order with deterministic ties; a retry
/// rolls S back, moves the failed pairs to the front and randomizes ties.
/// The attempt with the fewest failures is kept and applied to S.
BatchResult batch_connect(const LiftGraph& g, EmbeddingState& s, std::span<const std::pair<VertexId, VertexId>> pairs,
                          const RetryPolicy& policy = {}, std::size_t max_len = 0);

struct ExtendabilityReport {
  struct SizeStats {
    std::size_t size = 0;
    std::size_t tested = 0;
    std::size_t violations = 0;
    bool exhaustive = false;
    long long worst_margin = 0;
  };
  std::size_t tested_sets = 0;
  std::size_t violations = 0;
  long long worst_margin = 0;  // min over tested U of lhs - rhs
  std::optional<std::vector<VertexId>> violating_set;
  std::vector<SizeStats> per_size;
};

/// lhs - rhs of the extendability inequality for one set U:
///   |N'(U) \ V(S)| - [(D-1)|U| - sum_{u in U ∩ V(S)} (d_S(u) - 1)]
long long extendability_margin(const LiftGraph& g, const EmbeddingState& s, std::span<const VertexId> u);

/// Audits the extendability condition: exact over all host singletons,
/// `trials` uniform samples for each larger size. Sizes must lie in [1, 2m].
ExtendabilityReport check_extendable(const LiftGraph& g, const EmbeddingState& s, std::span<const std::size_t> set_sizes,
                                     std::size_t trials, std::uint64_t seed);

}  // namespace liftsub
