#include <gtest/gtest.h>

#include <set>

#include "liftsub/lift.hpp"
#include "liftsub/simple_graph.hpp"
#include "naive.hpp"

using namespace liftsub;

TEST(CompleteBase, SmallCases) {
  EXPECT_EQ(complete_base(3).edges(), (std::vector<BaseEdge>{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_TRUE(complete_base(1).edges().empty());
  EXPECT_EQ(complete_base(5).num_edges(), 10u);
  EXPECT_THROW(complete_base(0), PreconditionError);
}

TEST(BaseGraph, CanonicalizesAndRejects) {
  BaseGraph g(4, {{2, 1}, {0, 3}});
  EXPECT_EQ(g.edges(), (std::vector<BaseEdge>{{0, 3}, {1, 2}}));
  EXPECT_THROW(BaseGraph(3, {{0, 0}}), PreconditionError);
  EXPECT_THROW(BaseGraph(3, {{0, 3}}), PreconditionError);
  EXPECT_THROW(BaseGraph(3, {{0, 1}, {1, 0}}), PreconditionError);
}

TEST(SampleLift, OneLiftIsBase) {
  const LiftGraph g = sample_uniform_lift(complete_base(3), 1, 99);
  EXPECT_EQ(g.neighbors({0, 0}), (std::vector<VertexId>{{1, 0}, {2, 0}}));
  EXPECT_EQ(g.num_edges(), 3u);
}

TEST(SampleLift, K4FiveLift) {
  const LiftGraph g = sample_uniform_lift(complete_base(4), 5, 3);
  EXPECT_EQ(g.num_vertices(), 20u);
  EXPECT_EQ(g.num_edges(), 30u);
  std::size_t degree_sum = 0;
  for (auto v : naive::all_vertices(g)) {
    EXPECT_EQ(g.neighbors(v).size(), 3u);
    degree_sum += g.neighbors(v).size();
  }
  EXPECT_EQ(degree_sum, 60u);
}

TEST(SampleLift, NeighborsAgreeWithPermutationTable) {
  const LiftGraph g = sample_uniform_lift(complete_base(4), 3, 17);
  const auto vs = naive::all_vertices(g);
  for (auto u : vs) {
    const auto nb = g.neighbors(u);
    const std::set<VertexId> nbs(nb.begin(), nb.end());
    EXPECT_EQ(nbs.size(), nb.size());
    for (auto v : vs) {
      EXPECT_EQ(g.is_edge(u, v), naive::adjacent(g, u, v));
      EXPECT_EQ(g.is_edge(u, v), g.is_edge(v, u));
      EXPECT_EQ(nbs.contains(v), g.is_edge(u, v));
    }
    EXPECT_FALSE(g.is_edge(u, u));
  }
}

TEST(SampleLift, OutOfRange) {
  const LiftGraph g = sample_uniform_lift(complete_base(3), 2, 1);
  EXPECT_THROW(g.neighbors({3, 0}), std::out_of_range);
  EXPECT_THROW(g.neighbors({0, 2}), std::out_of_range);
  EXPECT_FALSE(g.is_edge({0, 0}, {9, 9}));
}

TEST(SampleLift, Deterministic) {
  const auto a = sample_uniform_lift(complete_base(6), 7, 42);
  const auto b = sample_uniform_lift(complete_base(6), 7, 42);
  const auto c = sample_uniform_lift(complete_base(6), 7, 43);
  EXPECT_EQ(a, b);
  EXPECT_EQ(serialize_lift(a), serialize_lift(b));
  EXPECT_NE(serialize_lift(a), serialize_lift(c));
}

TEST(SampleLift, GeneralBase) {
  const BaseGraph path(3, {{0, 1}, {1, 2}});
  const LiftGraph g = sample_uniform_lift(path, 4, 5);
  EXPECT_EQ(g.neighbors({0, 1}).size(), 1u);
  EXPECT_EQ(g.neighbors({1, 1}).size(), 2u);
  EXPECT_FALSE(g.neighbor_in({0, 0}, 2).has_value());
}

TEST(Serialize, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = sample_uniform_lift(complete_base(5), 4, seed);
    const auto text = serialize_lift(g);
    EXPECT_EQ(deserialize_lift(text), g);
    EXPECT_EQ(serialize_lift(deserialize_lift(text)), text);
  }
}

TEST(Serialize, RejectsNonBijection) {
  const std::string bad = R"({"n":2,"ell":2,"base_edges":[[0,1]],"matchings":{"0-1":[0,0]}})";
  try {
    deserialize_lift(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "matchings.0-1");
  }
}

TEST(Serialize, RejectsMissingEntry) {
  const std::string bad = R"({"n":3,"ell":2,"base_edges":[[0,1],[0,2]],"matchings":{"0-1":[0,1]}})";
  try {
    deserialize_lift(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("0-2"), std::string::npos);
  }
}

TEST(Serialize, RejectsMalformed) {
  EXPECT_THROW(deserialize_lift("not json"), ParseError);
  EXPECT_THROW(deserialize_lift(R"({"ell":2})"), ParseError);
  EXPECT_THROW(deserialize_lift(R"({"n":2,"ell":0,"base_edges":[],"matchings":{}})"), ParseError);
  EXPECT_THROW(deserialize_lift(R"({"n":2,"ell":2,"base_edges":[[0,1]],"matchings":{"0-1":[0,1],"0-5":[0,1]}})"),
               ParseError);
}

TEST(FiberSetTest, Basics) {
  FiberSet s = FiberSet::all(4);
  s.erase(2);
  EXPECT_EQ(s.size(), 3u);
  EXPECT_FALSE(s.contains(2));
  EXPECT_EQ(s.members(), (std::vector<std::uint32_t>{0, 1, 3}));
}

TEST(SimpleGraphTest, EdgeListRoundTrip) {
  const SimpleGraph p = SimpleGraph::petersen();
  EXPECT_EQ(p.num_edges(), 15u);
  EXPECT_EQ(p.max_degree(), 3u);
  const SimpleGraph q = parse_edge_list(format_edge_list(p));
  EXPECT_EQ(q.edges(), p.edges());
  EXPECT_THROW(parse_edge_list("0 1\n2 x\n"), ParseError);
}

TEST(SimpleGraphTest, FromLift) {
  const auto g = sample_uniform_lift(complete_base(4), 3, 2);
  const auto h = to_simple_graph(g);
  EXPECT_EQ(h.num_vertices(), 12u);
  EXPECT_EQ(h.num_edges(), g.num_edges());
  for (auto u : naive::all_vertices(g))
    for (auto v : naive::all_vertices(g))
      EXPECT_EQ(h.is_edge(static_cast<std::uint32_t>(g.slot(u)), static_cast<std::uint32_t>(g.slot(v))),
                g.is_edge(u, v));
}
