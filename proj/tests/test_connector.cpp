#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "liftsub/connector.hpp"
#include "liftsub/verifier.hpp"
#include "naive.hpp"

using namespace liftsub;

namespace {

// Internal vertices must be fresh, distinct and outside the pre-call S.
void expect_valid_path(const LiftGraph& g, const EmbeddingState& before, const PathResult& r, VertexId u, VertexId v,
                       std::size_t max_len) {
  ASSERT_GE(r.path.size(), 2u);
  EXPECT_EQ(r.path.front(), u);
  EXPECT_EQ(r.path.back(), v);
  EXPECT_LE(r.length(), max_len);
  std::set<VertexId> seen;
  for (std::size_t k = 0; k < r.path.size(); ++k) {
    EXPECT_TRUE(seen.insert(r.path[k]).second);
    if (k + 1 < r.path.size()) EXPECT_TRUE(naive::adjacent(g, r.path[k], r.path[k + 1]));
    if (k > 0 && k + 1 < r.path.size()) {
      EXPECT_FALSE(before.contains(r.path[k]));
      EXPECT_TRUE(before.in_host(r.path[k]));
    }
  }
}

}  // namespace

TEST(Params, DefaultsAndBound) {
  EXPECT_THROW(ExtendabilityParams(2, 1), PreconditionError);
  EXPECT_THROW(ExtendabilityParams(3, 0), PreconditionError);
  const ExtendabilityParams p(3, 4);  // log 8 / log 2 = 3
  EXPECT_EQ(p.path_length_bound(), 9u);
  const auto d = ExtendabilityParams::asymptotic_defaults(48, 64);
  EXPECT_EQ(d.D, 46u);
  EXPECT_EQ(d.m, static_cast<std::size_t>(std::ceil(5 * 64 * std::log(48.0))));
}

TEST(State, InvariantsAndSerialization) {
  const auto g = sample_uniform_lift(complete_base(6), 4, 1);
  EmbeddingState s(g, ExtendabilityParams(3, 2));
  const VertexId a{0, 0};
  const VertexId b = *g.neighbor_in(a, 1);
  const VertexId c = *g.neighbor_in(a, 2);
  const VertexId d = *g.neighbor_in(a, 3);
  s.add_edge(g, a, b);
  s.add_edge(g, a, c);
  s.add_edge(g, a, d);
  EXPECT_EQ(s.s_degree(a), 3u);
  EXPECT_THROW(s.add_edge(g, a, *g.neighbor_in(a, 4)), PreconditionError);  // D = 3
  EXPECT_THROW(s.add_edge(g, a, b), PreconditionError);
  EXPECT_THROW(s.add_edge(g, VertexId{0, 0}, VertexId{0, 1}), PreconditionError);
  s.check_invariants();
  const auto text = s.serialize();
  EXPECT_EQ(EmbeddingState::deserialize(g, text), s);
  EXPECT_EQ(EmbeddingState::deserialize(g, text).serialize(), text);
  EXPECT_THROW(EmbeddingState::deserialize(g, "{}"), ParseError);
}

TEST(Connect, AdjacentEndpointsGiveEdge) {
  const auto g = sample_uniform_lift(complete_base(5), 3, 2);
  EmbeddingState s(g, ExtendabilityParams(4, 2));
  const VertexId u{0, 0};
  const VertexId v = *g.neighbor_in(u, 3);
  s.add_vertex(u);
  s.add_vertex(v);
  const auto r = connect(g, s, u, v);
  EXPECT_EQ(r.length(), 1u);
  EXPECT_EQ(s.num_vertices(), 2u);
}

TEST(Connect, DegreesAfterSuccess) {
  const auto g = sample_uniform_lift(complete_base(12), 10, 3);
  EmbeddingState s(g, ExtendabilityParams(8, 4));
  const VertexId u{0, 0}, v{0, 1};  // same fiber, never adjacent
  s.add_vertex(u);
  s.add_vertex(v);
  const EmbeddingState before = s;
  const auto r = connect(g, s, u, v);
  expect_valid_path(g, before, r, u, v, s.params().path_length_bound());
  EXPECT_EQ(s.s_degree(u), 1u);
  EXPECT_EQ(s.s_degree(v), 1u);
  for (std::size_t k = 1; k + 1 < r.path.size(); ++k) EXPECT_EQ(s.s_degree(r.path[k]), 2u);
  s.check_invariants();
}

TEST(Connect, FailureLeavesStateUntouched) {
  const auto g = sample_uniform_lift(complete_base(4), 3, 5);
  // Host of two fibers: same-fiber endpoints in fiber 0 with host {0, 1} need a length-2 path
  // through fiber 1, which exists only if both share a neighbour there; they never do.
  EmbeddingState s(g, ExtendabilityParams(3, 1), FiberSet(4, std::vector<std::uint32_t>{0, 1}));
  s.add_vertex({0, 0});
  s.add_vertex({0, 1});
  const std::string before = s.serialize();
  EXPECT_THROW(connect(g, s, {0, 0}, {0, 1}, 3), NoPathWithinBudget);
  EXPECT_EQ(s.serialize(), before);
}

TEST(Connect, Preconditions) {
  const auto g = sample_uniform_lift(complete_base(5), 3, 5);
  EmbeddingState s(g, ExtendabilityParams(3, 1));
  s.add_vertex({0, 0});
  EXPECT_THROW(connect(g, s, {0, 0}, {0, 0}), PreconditionError);
  EXPECT_THROW(connect(g, s, {0, 0}, {1, 1}), PreconditionError);
}

TEST(Connect, TieSeedIsDeterministic) {
  const auto g = sample_uniform_lift(complete_base(15), 20, 8);
  auto run = [&](std::optional<std::uint64_t> seed) {
    EmbeddingState s(g, ExtendabilityParams(10, 5));
    s.add_vertex({0, 0});
    s.add_vertex({0, 1});
    return connect(g, s, {0, 0}, {0, 1}, 0, seed).path;
  };
  EXPECT_EQ(run(std::nullopt), run(std::nullopt));
  EXPECT_EQ(run(77), run(77));
}

TEST(Connect, HundredSequentialCalls) {
  const auto g = sample_uniform_lift(complete_base(48), 64, 21);
  const auto params = ExtendabilityParams::asymptotic_defaults(48, 64);
  EmbeddingState s(g, params);
  // 100 pairs between distinct layers of fiber 0 and fiber 1.
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (std::uint32_t k = 0; k < 50; ++k) {
    pairs.push_back({{0, k}, {1, k}});
    pairs.push_back({{2, k}, {3, k}});
  }
  for (auto [x, y] : pairs) {
    s.add_vertex(x);
    s.add_vertex(y);
  }
  std::set<VertexId> internal;
  for (auto [x, y] : pairs) {
    const EmbeddingState before = s;
    const auto r = connect(g, s, x, y);
    expect_valid_path(g, before, r, x, y, params.path_length_bound());
    for (std::size_t k = 1; k + 1 < r.path.size(); ++k) EXPECT_TRUE(internal.insert(r.path[k]).second);
  }
  s.check_invariants();
}

TEST(Batch, EmptyAndAdjacent) {
  const auto g = sample_uniform_lift(complete_base(6), 4, 2);
  EmbeddingState s(g, ExtendabilityParams(4, 2));
  EXPECT_TRUE(batch_connect(g, s, {}).ok());
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (std::uint32_t a = 0; a < 4; ++a) pairs.push_back({{0, a}, *g.neighbor_in({0, a}, 1)});
  for (auto [x, y] : pairs) {
    s.add_vertex(x);
    s.add_vertex(y);
  }
  const auto before = s.num_vertices();
  const auto r = batch_connect(g, s, pairs);
  ASSERT_TRUE(r.ok());
  for (const auto& p : r.paths) EXPECT_EQ(p->length(), 1u);
  EXPECT_EQ(s.num_vertices(), before);
}

TEST(Batch, DisjointAndCounted) {
  const auto g = sample_uniform_lift(complete_base(20), 30, 6);
  const ExtendabilityParams params(6, 4);
  EmbeddingState s(g, params);
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (std::uint32_t a = 0; a < 10; ++a) pairs.push_back({{0, a}, {0, a + 10}});
  for (auto [x, y] : pairs) {
    s.add_vertex(x);
    s.add_vertex(y);
  }
  const auto before = s.num_vertices();
  const auto r = batch_connect(g, s, pairs, RetryPolicy{3, 5});
  ASSERT_TRUE(r.ok());
  std::set<VertexId> internal;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    ASSERT_TRUE(r.paths[i]);
    EXPECT_EQ(r.paths[i]->path.front(), pairs[i].first);
    EXPECT_EQ(r.paths[i]->path.back(), pairs[i].second);
    for (std::size_t k = 1; k + 1 < r.paths[i]->path.size(); ++k) EXPECT_TRUE(internal.insert(r.paths[i]->path[k]).second);
  }
  EXPECT_LE(s.num_vertices() - before, pairs.size() * (params.path_length_bound() - 1));
  s.check_invariants();
}

TEST(Batch, ReportsFailuresWithIndices) {
  const auto g = sample_uniform_lift(complete_base(3), 2, 1);
  EmbeddingState s(g, ExtendabilityParams(3, 1), FiberSet(3, std::vector<std::uint32_t>{0}));
  std::vector<std::pair<VertexId, VertexId>> pairs{{{0, 0}, {0, 1}}};
  s.add_vertex({0, 0});
  s.add_vertex({0, 1});
  const auto r = batch_connect(g, s, pairs, RetryPolicy{3, 0});
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.failed, std::vector<std::size_t>{0});
  EXPECT_EQ(r.attempts_used, 3u);
  EXPECT_EQ(r.failure_reasons.size(), 1u);
}

TEST(Extendable, EmptySNoSingletonViolation) {
  const auto g = sample_uniform_lift(complete_base(10), 6, 4);
  EmbeddingState s(g, ExtendabilityParams(9, 3));
  const std::vector<std::size_t> sizes{1, 2, 6};
  const auto r = check_extendable(g, s, sizes, 100, 1);
  EXPECT_EQ(r.per_size[0].violations, 0u);
  EXPECT_EQ(r.per_size[0].tested, g.num_vertices());
  EXPECT_THROW(check_extendable(g, s, std::vector<std::size_t>{7}, 1, 1), PreconditionError);
}

TEST(Extendable, MarginFormula) {
  const auto g = sample_uniform_lift(complete_base(8), 5, 9);
  EmbeddingState s(g, ExtendabilityParams(5, 2));
  const VertexId u{0, 0};
  const VertexId w = *g.neighbor_in(u, 1);
  s.add_edge(g, u, w);
  // u in S with d_S = 1: rhs = (D-1)*1 - 0; lhs = 7 neighbours minus w.
  const std::vector<VertexId> one{u};
  EXPECT_EQ(extendability_margin(g, s, one), 6 - 4);
}

TEST(Extendable, TransversalSetting) {
  // S = empty graph on n disjoint transversals of a lift of K_{n-1} (fibers 1..n-1).
  const std::size_t n = 48, ell = 64;
  const auto g = sample_uniform_lift(complete_base(n), ell, 13);
  FiberSet host = FiberSet::all(n);
  host.erase(0);
  EmbeddingState s(g, ExtendabilityParams(3, 32), host);
  for (std::uint32_t a = 0; a < n; ++a)
    for (auto v : g.neighbors({0, a})) s.add_vertex(v);
  const std::vector<std::size_t> sizes{1, 2, 16, 64};
  const auto r = check_extendable(g, s, sizes, 10'000, 2);
  // The exhaustive singleton pass meets the Binomial(46, 1/4) lower tail: a handful of
  // transversal vertices have fewer than D free neighbours. Sampled sizes must be clean.
  ASSERT_EQ(r.per_size.size(), sizes.size());
  EXPECT_TRUE(r.per_size[0].exhaustive);
  EXPECT_LE(r.per_size[0].violations * 200, r.per_size[0].tested);
  for (std::size_t i = 1; i < r.per_size.size(); ++i)
    EXPECT_EQ(r.per_size[i].violations, 0u) << "size " << r.per_size[i].size;
}
