#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "liftsub/connector.hpp"
#include "liftsub/lift.hpp"
#include "liftsub/verifier.hpp"

namespace liftsub {

/// sqrt(2 n ell / (1 - 1/ell)); the clique-subdivision order a typical
/// small-ell lift of K_n reaches. Throws PreconditionError for ell < 2.
double target_order(std::size_t n, std::size_t ell);

enum class CrossMatchingRule {
  Always,             // always seed the template with a greedy cross-matching
  AsymptoticWindow,   // only when ell <= gamma^3 n^2 / 48
  Never,
};

struct BuildConfig {
  double epsilon = 0.1;
  std::optional<double> gamma;                 // default epsilon / 11
  std::optional<ExtendabilityParams> params;   // default (n^0.99, 5 ell ln n)
  std::uint64_t seed = 0;
  RetryPolicy retry{};
  bool random_choice = false;                  // seed-driven branch / transversal selection

  // large-ell pipeline
  CrossMatchingRule cross_matching = CrossMatchingRule::Always;

  // small-ell pipeline: thresholds are multiples of epsilon * b
  double prune_multiplier = 0.25;
  double star_multiplier = 0.25;
  bool uniform_stars = false;  // every centre gets a full-size star
  double prune_floor = 0.5;    // abort when fewer than this fraction of b survive pruning

  /// The constants of the asymptotic argument: 1/40 multipliers, uniform
  /// stars, cross-matching only inside its window.
  static BuildConfig asymptotic(double epsilon);

  double effective_gamma() const { return gamma.value_or(epsilon / 11.0); }
};

struct BuildStats {
  std::size_t requested_order = 0;   // n, or b for the small-ell pipeline
  std::size_t achieved_order = 0;
  std::size_t direct_edges = 0;      // pairs joined by a single lift edge
  std::size_t cross_matching_edges = 0;
  std::size_t length2_paths = 0;
  std::size_t connector_paths = 0;
  std::size_t pruned_branch = 0;     // removed for missing too many connections
  std::size_t dropped_branch = 0;    // removed for lack of a star or a route
  std::size_t branch_vertices = 0;
  std::size_t internal_vertices = 0;
  std::size_t total_vertices = 0;
  std::size_t max_path_length = 0;
  std::size_t path_length_bound = 0;
};

struct BuildFailure {
  std::string stage;
  std::string reason;
};

/// Exactly one of certificate / failure is set. A certificate is only
/// returned after it passed verify_certificate against the input lift.
struct BuildOutcome {
  std::string builder;  // "large" or "small"
  std::optional<SubdivisionCertificate> certificate;
  std::optional<BuildFailure> failure;
  BuildStats stats;
  std::vector<std::string> warnings;

  bool ok() const { return certificate.has_value(); }
};

/// K_n subdivision with all branch vertices in one fiber W. The
/// neighbourhoods of the branch vertices are disjoint transversals of
/// G - W; a greedy cross-matching joins as many transversal pairs as it
/// can by single edges, and the connector routes the rest inside G - W.
BuildOutcome build_large_ell(const LiftGraph& g, const BuildConfig& cfg);

/// Clique subdivision for small ell: a partial transversal B in fibers F1,
/// joined by direct edges and length-2 paths through F1, pruned, then
/// completed through stars into the reserved fibers F2.
BuildOutcome build_small_ell(const LiftGraph& g, const BuildConfig& cfg);

enum class BuilderKind { Large, Small, Auto };

/// Auto picks the large-ell pipeline for ell >= (1+eps) n, the small-ell
/// one for ell <= (1-eps) n, and otherwise runs both and keeps the larger
/// verified result.
BuildOutcome build(const LiftGraph& g, BuilderKind kind, const BuildConfig& cfg);

std::string serialize_outcome(const BuildOutcome& outcome);

}  // namespace liftsub
