#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "liftsub/builder.hpp"
#include "liftsub/verifier.hpp"

using namespace liftsub;

namespace {

void expect_stats_reconcile(const BuildOutcome& out) {
  ASSERT_TRUE(out.ok());
  const auto& c = *out.certificate;
  EXPECT_EQ(out.stats.achieved_order, certificate_order(c));
  EXPECT_EQ(out.stats.branch_vertices + out.stats.internal_vertices, certificate_vertex_count(c));
  EXPECT_EQ(out.stats.total_vertices, certificate_vertex_count(c));
}

}  // namespace

TEST(TargetOrder, Formula) {
  EXPECT_NEAR(target_order(100, 4), std::sqrt(800.0 / 0.75), 1e-12);
  EXPECT_NEAR(target_order(100, 4), 32.660, 1e-3);
  EXPECT_NEAR(target_order(50, 2), 2.0 * std::sqrt(2.0 * 50), 1e-12);
  EXPECT_NEAR(target_order(10, 100000) / std::sqrt(2.0 * 10 * 100000), 1.0, 1e-4);
  EXPECT_THROW(target_order(10, 1), PreconditionError);
}

TEST(LargeEll, K8InEighteenLift) {
  const auto g = sample_uniform_lift(complete_base(8), 18, 1);
  BuildConfig cfg;
  cfg.epsilon = 1.0;
  const auto out = build_large_ell(g, cfg);
  ASSERT_TRUE(out.ok());
  EXPECT_TRUE(verify_certificate(g, *out.certificate).passed);
  EXPECT_EQ(out.stats.achieved_order, 8u);
  expect_stats_reconcile(out);
}

TEST(LargeEll, BranchInOneFiberAndLengthBound) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = sample_uniform_lift(complete_base(30), 45, seed);
    BuildConfig cfg;
    cfg.epsilon = 0.5;
    cfg.seed = seed;
    const auto out = build_large_ell(g, cfg);
    ASSERT_TRUE(out.ok()) << out.failure->stage;
    EXPECT_TRUE(verify_certificate(g, *out.certificate).passed);
    std::set<std::uint32_t> fibers;
    for (auto v : out.certificate->branch) fibers.insert(v.fiber);
    EXPECT_EQ(fibers.size(), 1u);
    // Each path is branch + routed section + branch; the routed section obeys the connector bound.
    for (const auto& [k, p] : out.certificate->paths) EXPECT_LE(p.size() - 3, out.stats.path_length_bound);
    EXPECT_EQ(out.stats.cross_matching_edges + out.stats.connector_paths, 30u * 29u / 2u);
    expect_stats_reconcile(out);
  }
}

TEST(LargeEll, RandomChoiceIsSeeded) {
  const auto g = sample_uniform_lift(complete_base(10), 20, 2);
  BuildConfig cfg;
  cfg.random_choice = true;
  cfg.seed = 9;
  const auto a = build_large_ell(g, cfg);
  const auto b = build_large_ell(g, cfg);
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(serialize_outcome(a), serialize_outcome(b));
  EXPECT_TRUE(verify_certificate(g, *a.certificate).passed);
}

TEST(LargeEll, WarnsBelowThresholdAndFailsWhenInfeasible) {
  const auto g = sample_uniform_lift(complete_base(10), 10, 2);
  const auto out = build_large_ell(g, BuildConfig{});
  EXPECT_FALSE(out.warnings.empty());
  const auto h = sample_uniform_lift(complete_base(10), 6, 2);
  const auto bad = build_large_ell(h, BuildConfig{});
  ASSERT_FALSE(bad.ok());
  EXPECT_EQ(bad.failure->stage, "branch-infeasible");
  EXPECT_FALSE(bad.certificate.has_value());
}

TEST(LargeEll, RejectsNonCompleteBase) {
  const auto g = sample_uniform_lift(BaseGraph(3, {{0, 1}}), 5, 0);
  EXPECT_THROW(build_large_ell(g, BuildConfig{}), PreconditionError);
}

TEST(LargeEll, AsymptoticWindowSkipsMatching) {
  const auto g = sample_uniform_lift(complete_base(12), 30, 4);
  const auto cfg = BuildConfig::asymptotic(0.5);
  const auto out = build_large_ell(g, cfg);
  EXPECT_EQ(out.stats.cross_matching_edges, 0u);  // ell > gamma^3 n^2 / 48 here
}

TEST(SmallEll, N400Cells) {
  std::size_t previous = 0;
  for (std::size_t ell : {2, 3, 4}) {
    const auto g = sample_uniform_lift(complete_base(400), ell, 100 + ell);
    BuildConfig cfg;
    cfg.seed = ell;
    const auto out = build_small_ell(g, cfg);
    ASSERT_TRUE(out.ok()) << out.failure->stage << ": " << out.failure->reason;
    EXPECT_TRUE(verify_certificate(g, *out.certificate).passed);
    std::set<std::uint32_t> fibers;
    for (auto v : out.certificate->branch) EXPECT_TRUE(fibers.insert(v.fiber).second);  // partial transversal
    expect_stats_reconcile(out);
    EXPECT_GE(out.stats.achieved_order, previous);
    previous = out.stats.achieved_order;
  }
}

TEST(SmallEll, LengthTwoMiddlesOutsideBranchAndUnique) {
  const auto g = sample_uniform_lift(complete_base(200), 3, 8);
  const auto out = build_small_ell(g, BuildConfig{});
  ASSERT_TRUE(out.ok());
  const std::set<VertexId> branch(out.certificate->branch.begin(), out.certificate->branch.end());
  std::set<VertexId> middles;
  for (const auto& [k, p] : out.certificate->paths)
    if (p.size() == 3) {
      EXPECT_FALSE(branch.contains(p[1]));
      EXPECT_TRUE(middles.insert(p[1]).second);
    }
  EXPECT_EQ(out.stats.length2_paths, middles.size());
}

TEST(SmallEll, StarsAndConnectorStages) {
  const auto g = sample_uniform_lift(complete_base(100), 8, 7);
  BuildConfig cfg;
  cfg.prune_multiplier = 3.0;
  const auto out = build_small_ell(g, cfg);
  ASSERT_TRUE(out.ok()) << out.failure->reason;
  EXPECT_TRUE(verify_certificate(g, *out.certificate).passed);
  EXPECT_GT(out.stats.connector_paths, 0u);
  EXPECT_EQ(out.stats.direct_edges + out.stats.length2_paths + out.stats.connector_paths,
            out.stats.achieved_order * (out.stats.achieved_order - 1) / 2);
  expect_stats_reconcile(out);
}

TEST(SmallEll, PruneFloorAborts) {
  const auto g = sample_uniform_lift(complete_base(40), 4, 7);
  const auto out = build_small_ell(g, BuildConfig{});
  ASSERT_FALSE(out.ok());
  EXPECT_EQ(out.failure->stage, "pruned-too-many");
}

TEST(SmallEll, AsymptoticConstantsRun) {
  const auto g = sample_uniform_lift(complete_base(400), 2, 3);
  const auto out = build_small_ell(g, BuildConfig::asymptotic(0.1));
  if (out.ok()) EXPECT_TRUE(verify_certificate(g, *out.certificate).passed);
}

TEST(SmallEll, Preconditions) {
  const auto g = sample_uniform_lift(complete_base(10), 1, 0);
  EXPECT_THROW(build_small_ell(g, BuildConfig{}), PreconditionError);
}

TEST(Auto, PicksRegime) {
  const auto big = sample_uniform_lift(complete_base(10), 30, 0);
  EXPECT_EQ(build(big, BuilderKind::Auto, BuildConfig{}).builder, "large");
  const auto small = sample_uniform_lift(complete_base(200), 3, 0);
  EXPECT_EQ(build(small, BuilderKind::Auto, BuildConfig{}).builder, "small");
  const auto mid = sample_uniform_lift(complete_base(20), 20, 0);
  const auto out = build(mid, BuilderKind::Auto, BuildConfig{});
  if (out.ok()) EXPECT_TRUE(verify_certificate(mid, *out.certificate).passed);
}

TEST(Outcome, DeterministicSerialization) {
  const auto g = sample_uniform_lift(complete_base(20), 30, 5);
  BuildConfig cfg;
  cfg.seed = 5;
  EXPECT_EQ(serialize_outcome(build_large_ell(g, cfg)), serialize_outcome(build_large_ell(g, cfg)));
  const auto text = serialize_outcome(build_large_ell(g, cfg));
  EXPECT_TRUE(verify_certificate(g, deserialize_certificate(text)).passed);
}
