#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "liftsub/lift.hpp"
#include "liftsub/pseudo_props.hpp"
#include "liftsub/simple_graph.hpp"
#include "liftsub/verifier.hpp"

namespace liftsub {

struct OracleBudget {
  std::size_t max_nodes = 24;
  std::uint64_t max_states = 100'000'000;
  std::chrono::milliseconds time_limit{60'000};
};

using GraphCertificate = BasicCertificate<std::uint32_t>;

struct HajosResult {
  std::size_t value = 0;        // exact value, or the certified lower bound b0
  bool exact = true;
  std::size_t upper_bound = 0;  // every order above this is ruled out
  std::optional<GraphCertificate> certificate;  // witness for `value`
  std::uint64_t states = 0;
};

/// Largest b with a K_b subdivision in h, by descending search from
/// min(|V|, Delta + 1). When the budget runs out the result is partial:
/// exact = false, value = a certified lower bound, upper_bound = the order
/// whose search was interrupted. Throws PreconditionError if |V| exceeds
/// budget.max_nodes.
HajosResult exact_hajos_number(const SimpleGraph& h, const OracleBudget& budget = {});

/// Internally disjoint paths joining every pair of `branch`, or nullopt.
/// Throws BudgetExceeded when the state budget runs out.
std::optional<GraphCertificate> find_subdivision_with_branch_set(const SimpleGraph& h,
                                                                 std::span<const std::uint32_t> branch,
                                                                 const OracleBudget& budget = {});

struct MaxEdgesResult {
  std::size_t value = 0;  // exact maximum, or a lower bound when !exact
  bool exact = true;
  std::vector<std::uint32_t> subset;
};

/// max over b-subsets B of e(h[B]), by branch and bound.
MaxEdgesResult max_edges_on_b_subset(const SimpleGraph& h, std::size_t b, const OracleBudget& budget = {});

enum class CountingVerdict { NoSubdivision, Inconclusive };

struct CountingResult {
  CountingVerdict verdict = CountingVerdict::Inconclusive;
  long long threshold = 0;  // binomial(b,2) + b - |V|
  MaxEdgesResult max_edges;
};

/// A K_b subdivision needs a private internal vertex for every non-adjacent
/// branch pair, so its branch set spans at least binomial(b,2) + b - |V|
/// edges. "No" is returned only when the exact maximum falls short.
CountingResult subdivision_nonexistence_by_counting(const SimpleGraph& h, std::size_t b,
                                                    const OracleBudget& budget = {});
CountingResult subdivision_nonexistence_by_counting(const LiftGraph& g, std::size_t b,
                                                    const OracleBudget& budget = {});

/// True iff two distinct vertices of x share at least two neighbours outside x.
bool check_property_P(const LiftGraph& g, std::span<const VertexId> x);

struct PropertyPSearch {
  std::optional<std::vector<VertexId>> violator;
  std::size_t examined = 0;
  bool exhaustive = false;        // every n-subset was examined
  bool budget_exhausted = false;  // sampled instead of enumerating
};

/// Looks for an n-set violating property (P). Enumerates all n-subsets when
/// binomial(n ell, n) <= budget.max_states, otherwise samples `samples` of them.
PropertyPSearch search_property_P_violator(const LiftGraph& g, const OracleBudget& budget, std::uint64_t seed,
                                           std::size_t samples = 10'000);

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

inline constexpr std::size_t kMaxPermanentOrder = 12;

/// Ryser's formula with Gray-code updates; 0/1 square matrix, order <= 12.
std::int64_t permanent(const std::vector<std::vector<std::uint8_t>>& a);

/// perm(J - A_F) / ell!, reduced. Refuses ell > 12 with PreconditionError.
Rational exact_avoidance_probability(std::span<const LayerPair> forbidden, std::size_t ell);

}  // namespace liftsub
