#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "liftsub/lift.hpp"
#include "liftsub/verifier.hpp"

namespace liftsub {

// ---------------------------------------------------------------------------
// m-joinedness: every two disjoint vertex sets of size >= m span a crossing
// edge. Sets larger than m only add crossing edges, so it suffices to look at
// pairs of size exactly m.
// ---------------------------------------------------------------------------

enum class JoinMode { Exhaustive, Sampled };

struct JoinedVerdict {
  bool holds = true;
  /// (A, B) with |A| = |B| = m and no A-B edge. In sampled mode its presence
  /// proves failure; its absence proves nothing.
  std::optional<std::pair<std::vector<VertexId>, std::vector<VertexId>>> witness;
  JoinMode mode = JoinMode::Exhaustive;
  std::size_t trials = 0;
};

inline constexpr double kDefaultJoinBudget = 1e7;

/// Exhaustive mode refuses with BudgetExceeded when binomial(|V|, m)^2
/// exceeds `budget`; it never falls back to sampling.
JoinedVerdict check_joined(const LiftGraph& g, std::size_t m, JoinMode mode, std::size_t trials,
                           std::uint64_t seed, double budget = kDefaultJoinBudget);

// ---------------------------------------------------------------------------
// Expansion into a fixed vertex set V:
//   |N(U) ∩ V| >= min{eps*n*|U|, eps^6*ell*n}
// where N(U) is the closed neighbourhood (U together with its neighbours).
// ---------------------------------------------------------------------------

struct ExpansionReport {
  struct SizeStats {
    std::size_t size = 0;
    std::size_t tested = 0;
    std::size_t violations = 0;
    bool exhaustive = false;
    double worst_ratio = 0.0;
  };

  double epsilon = 0.0;
  std::size_t tested_sets = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // min over tested U of |N(U) ∩ V| / bound
  std::optional<std::vector<VertexId>> violating_set;
  std::vector<SizeStats> per_size;
};

/// Required lower bound for a set of the given size.
double expansion_bound(std::size_t n, std::size_t ell, double epsilon, std::size_t set_size);

/// Singletons are checked exhaustively; every other requested size is
/// sampled `trials` times uniformly from all vertex subsets of that size.
/// Throws PreconditionError naming the first fiber holding fewer than
/// max{9*eps*ell, ell - n} vertices of `target`.
ExpansionReport check_expansion_into(const LiftGraph& g, std::span<const VertexId> target, double epsilon,
                                     std::span<const std::size_t> set_sizes, std::size_t trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Cross-matchings between disjoint transversals.
// ---------------------------------------------------------------------------

struct CrossMatching {
  struct Edge {
    VertexId u;  // in transversal pair.first
    VertexId v;  // in transversal pair.second
    BranchPair pair;
  };
  std::vector<Edge> edges;
  std::set<BranchPair> covered_pairs;

  std::size_t uncovered_pairs(std::size_t num_transversals) const {
    return num_transversals * (num_transversals - 1) / 2 - covered_pairs.size();
  }
};

/// Greedy matching with at most one edge per transversal pair. Pairs are
/// visited lexicographically and, inside a pair, candidate edges by the
/// fiber of the first endpoint; sweeps repeat until no edge can be added.
///
/// Transversals are taken relative to `host` (one vertex per host fiber);
/// an empty host means all fibers.
CrossMatching find_cross_matching(const LiftGraph& g, std::span<const std::vector<VertexId>> transversals,
                                  const FiberSet& host = {});

// ---------------------------------------------------------------------------
// Avoidance probability of a uniform perfect matching of [ell] x [ell].
// ---------------------------------------------------------------------------

using LayerPair = std::pair<std::uint32_t, std::uint32_t>;

struct AvoidanceEstimate {
  double estimate = 1.0;
  double lower = 1.0;  // two-sided 99% Wilson score interval
  double upper = 1.0;
  std::size_t trials = 0;
  std::size_t avoided = 0;
};

/// Two-sided Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z);
inline constexpr double kZ99 = 2.5758293035489004;

AvoidanceEstimate estimate_avoidance_probability(std::span<const LayerPair> forbidden, std::size_t ell,
                                                 std::size_t trials, std::uint64_t seed);

}  // namespace liftsub
