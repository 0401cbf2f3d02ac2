#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "liftsub/oracle.hpp"
#include "liftsub/rng.hpp"
#include "naive.hpp"

using namespace liftsub;

namespace {

SimpleGraph random_graph(std::size_t n, double p, Rng& rng) {
  SimpleGraph h(n);
  std::bernoulli_distribution coin(p);
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v)
      if (coin(rng)) h.add_edge(u, v);
  return h;
}

SimpleGraph complete_bipartite(std::size_t a, std::size_t b) {
  SimpleGraph h(a + b);
  for (std::uint32_t u = 0; u < a; ++u)
    for (std::uint32_t v = 0; v < b; ++v) h.add_edge(u, static_cast<std::uint32_t>(a + v));
  return h;
}

}  // namespace

TEST(Hajos, KnownValues) {
  EXPECT_EQ(exact_hajos_number(SimpleGraph::complete(5)).value, 5u);
  EXPECT_EQ(exact_hajos_number(SimpleGraph::cycle(7)).value, 3u);
  EXPECT_EQ(exact_hajos_number(SimpleGraph::petersen()).value, 4u);
  EXPECT_EQ(exact_hajos_number(complete_bipartite(3, 3)).value, 4u);
  EXPECT_EQ(exact_hajos_number(SimpleGraph(4)).value, 1u);
  EXPECT_EQ(exact_hajos_number(SimpleGraph(0)).value, 0u);
  SimpleGraph path(3);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  EXPECT_EQ(exact_hajos_number(path).value, 2u);
}

TEST(Hajos, CertificatesVerify) {
  Rng rng(1);
  for (int t = 0; t < 30; ++t) {
    const auto h = random_graph(8, 0.5, rng);
    const auto r = exact_hajos_number(h);
    ASSERT_TRUE(r.exact);
    ASSERT_TRUE(r.certificate);
    EXPECT_EQ(r.certificate->branch.size(), r.value);
    EXPECT_TRUE(verify_certificate(h, *r.certificate).passed);
    EXPECT_LE(r.value, h.max_degree() + 1);
  }
}

TEST(Hajos, MonotoneUnderEdgeAddition) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    auto h = random_graph(8, 0.35, rng);
    const auto before = exact_hajos_number(h).value;
    h.add_edge(static_cast<std::uint32_t>(uniform_below(rng, 8)), static_cast<std::uint32_t>(uniform_below(rng, 8)));
    EXPECT_GE(exact_hajos_number(h).value, before);
  }
}

TEST(Hajos, BudgetGivesPartialAnswer) {
  OracleBudget tiny;
  tiny.max_states = 5;
  const auto r = exact_hajos_number(SimpleGraph::petersen(), tiny);
  EXPECT_FALSE(r.exact);
  EXPECT_EQ(r.value, 3u);  // Petersen has a cycle
  EXPECT_EQ(r.upper_bound, 4u);
  OracleBudget few_nodes;
  few_nodes.max_nodes = 5;
  EXPECT_THROW(exact_hajos_number(SimpleGraph::petersen(), few_nodes), PreconditionError);
}

TEST(Hajos, FixedBranchSet) {
  const auto c = find_subdivision_with_branch_set(SimpleGraph::cycle(6), std::vector<std::uint32_t>{0, 2, 4});
  ASSERT_TRUE(c);
  EXPECT_TRUE(verify_certificate(SimpleGraph::cycle(6), *c).passed);
  EXPECT_FALSE(find_subdivision_with_branch_set(SimpleGraph::cycle(6), std::vector<std::uint32_t>{0, 1, 2, 3}));
}

TEST(MaxEdges, AgreesWithEnumeration) {
  EXPECT_EQ(max_edges_on_b_subset(SimpleGraph::complete(5), 3).value, 3u);
  EXPECT_EQ(max_edges_on_b_subset(SimpleGraph(6), 4).value, 0u);
  Rng rng(4);
  for (int t = 0; t < 40; ++t) {
    const auto h = random_graph(10, 0.4, rng);
    for (std::size_t b = 1; b <= 10; b += 3) {
      const auto r = max_edges_on_b_subset(h, b);
      EXPECT_TRUE(r.exact);
      EXPECT_EQ(r.value, naive::max_edges(h, b));
      EXPECT_EQ(r.subset.size(), b);
    }
  }
}

TEST(Counting, VacuousAndClique) {
  EXPECT_EQ(subdivision_nonexistence_by_counting(SimpleGraph::cycle(10), 3).verdict, CountingVerdict::Inconclusive);
  const auto k = subdivision_nonexistence_by_counting(SimpleGraph::complete(6), 6);
  EXPECT_EQ(k.threshold, 15);
  EXPECT_EQ(k.verdict, CountingVerdict::Inconclusive);
  EXPECT_EQ(subdivision_nonexistence_by_counting(SimpleGraph::complete(3), 4).verdict, CountingVerdict::NoSubdivision);
}

TEST(Counting, LiftN6L3B8) {
  const auto g = sample_uniform_lift(complete_base(6), 3, 1);
  const auto r = subdivision_nonexistence_by_counting(g, 8);
  EXPECT_EQ(r.threshold, 18);
  EXPECT_TRUE(r.max_edges.exact);
  if (r.verdict == CountingVerdict::NoSubdivision) {
    EXPECT_LT(exact_hajos_number(to_simple_graph(g)).value, 8u);
  }
}

TEST(PropertyP, FullVertexSetIsFalse) {
  const auto g = sample_uniform_lift(complete_base(4), 3, 0);
  EXPECT_FALSE(check_property_P(g, naive::all_vertices(g)));
}

TEST(PropertyP, AgreesWithTripleLoop) {
  Rng rng(6);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 3 + uniform_below(rng, 4);
    const std::size_t ell = 1 + uniform_below(rng, 30 / n);
    const auto g = sample_uniform_lift(complete_base(n), ell, t);
    auto all = naive::all_vertices(g);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(n, all.size()));
    EXPECT_EQ(check_property_P(g, all), naive::property_P(g, all));
  }
}

TEST(PropertyP, SearchExhaustiveAndSampled) {
  const auto g = sample_uniform_lift(complete_base(4), 3, 2);
  const auto r = search_property_P_violator(g, OracleBudget{}, 0);
  EXPECT_TRUE(r.exhaustive);
  if (r.violator) {
    EXPECT_FALSE(naive::property_P(g, *r.violator));
  } else {
    EXPECT_EQ(r.examined, 495u);  // binomial(12, 4)
  }
  OracleBudget small;
  small.max_states = 10;
  const auto s = search_property_P_violator(g, small, 0, 50);
  EXPECT_TRUE(s.budget_exhausted);
  EXPECT_FALSE(s.exhaustive);
}

TEST(Permanent, SmallMatrices) {
  EXPECT_EQ(permanent({}), 1);
  EXPECT_EQ(permanent({{1, 1}, {1, 1}}), 2);
  EXPECT_EQ(permanent({{1, 0}, {0, 1}}), 1);
  std::vector<std::vector<std::uint8_t>> j(6, std::vector<std::uint8_t>(6, 1));
  EXPECT_EQ(permanent(j), 720);
}

TEST(AvoidanceExact, KnownValues) {
  EXPECT_EQ(exact_avoidance_probability({}, 5), (Rational{1, 1}));
  const std::vector<LayerPair> id{{0, 0}, {1, 1}, {2, 2}};
  EXPECT_EQ(exact_avoidance_probability(id, 3), (Rational{1, 3}));
  EXPECT_THROW(exact_avoidance_probability({}, 13), PreconditionError);
}

TEST(AvoidanceExact, MatchesEnumerationAndBound) {
  Rng rng(8);
  for (int t = 0; t < 60; ++t) {
    const std::size_t ell = 2 + uniform_below(rng, 6);
    std::set<LayerPair> s;
    const std::size_t k = uniform_below(rng, ell * ell + 1);
    while (s.size() < k)
      s.insert({static_cast<std::uint32_t>(uniform_below(rng, ell)), static_cast<std::uint32_t>(uniform_below(rng, ell))});
    const std::vector<LayerPair> f(s.begin(), s.end());
    const auto exact = exact_avoidance_probability(f, ell);
    const auto [good, total] = naive::avoidance_by_enumeration(f, ell);
    EXPECT_EQ(exact.num * total, good * exact.den);
    EXPECT_LE(exact.value(), std::exp(-static_cast<double>(f.size()) / (2.0 * static_cast<double>(ell))) + 1e-12);
  }
}

TEST(AvoidanceExact, MonotoneInF) {
  Rng rng(9);
  const std::size_t ell = 7;
  std::vector<LayerPair> f;
  Rational prev = exact_avoidance_probability(f, ell);
  for (int t = 0; t < 30; ++t) {
    f.push_back({static_cast<std::uint32_t>(uniform_below(rng, ell)), static_cast<std::uint32_t>(uniform_below(rng, ell))});
    const Rational cur = exact_avoidance_probability(f, ell);
    EXPECT_LE(cur.value(), prev.value() + 1e-15);
    prev = cur;
  }
}
