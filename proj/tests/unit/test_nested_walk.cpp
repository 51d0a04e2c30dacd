#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "brwbrw/analysis.hpp"
#include "brwbrw/error.hpp"
#include "brwbrw/nested_walk.hpp"
#include "brwbrw/trace_graph.hpp"
#include "brwbrw/walk.hpp"

using namespace brwbrw;
using namespace brwbrw::nested;

namespace {

Trajectory path_of(std::initializer_list<LatticePosition> points) {
  Trajectory t;
  for (const auto& p : points) t.push_back(p);
  return t;
}

StepDistribution layer0(std::vector<double> w) { return validate_distribution(w, Layer::LayerZero); }
StepDistribution layer1(std::vector<double> w) { return validate_distribution(w, Layer::LayerOne); }

}  // namespace

TEST(TransitionProbabilities, FrozenExamples) {
  const auto g = build_trace(path_of({{0, 0}, {1, 0}, {1, 1}, {1, 0}}));
  const auto dist1 = layer1({0.4, 0.2, 0.2, 0.2});

  const auto at_corner = transition_probabilities(g, dist1, {1, 0});
  EXPECT_EQ(at_corner.directions, (std::vector<Direction>{direction_of(0, -1), direction_of(1, 1)}));
  EXPECT_DOUBLE_EQ(at_corner.probabilities[0], 0.5);
  EXPECT_DOUBLE_EQ(at_corner.probabilities[1], 0.5);

  const auto dead_end = transition_probabilities(g, dist1, {1, 1});
  EXPECT_EQ(dead_end.directions, (std::vector<Direction>{direction_of(1, -1)}));
  EXPECT_DOUBLE_EQ(dead_end.probabilities[0], 1.0);
}

TEST(TransitionProbabilities, IntervalInterior) {
  const auto g = build_trace(path_of({{0}, {1}, {2}, {3}}));
  const auto law = transition_probabilities(g, layer1({2.0 / 3.0, 1.0 / 3.0}), {1});
  EXPECT_NEAR(law.probabilities[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(law.probabilities[1], 1.0 / 3.0, 1e-15);
}

TEST(TransitionProbabilities, Errors) {
  const auto g = TraceGraph::generate(layer0({0.7, 0.3}), 50, {1, 0});
  const auto dist1 = layer1({0.6, 0.4});
  try {
    transition_probabilities(g, dist1, g.trajectory().back());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FrontierNotExtended);
  }
  try {
    transition_probabilities(g, dist1, {1000});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownVertex);
  }
}

TEST(RunNestedWalk, ZeroSteps) {
  const auto run = run_nested_walk(layer0({0.7, 0.3}), layer1({0.6, 0.4}), 0, {1, 0});
  ASSERT_EQ(run.path.size(), 1u);
  EXPECT_EQ(run.path[0], LatticePosition({0}));
}

TEST(RunNestedWalk, BalancedOneDimensionalStaysOnInterval) {
  const auto dist0 = layer0({0.7, 0.3});
  const auto run = run_nested_walk(dist0, layer1({0.5, 0.5}), 10'000, {2, 0});
  NestedWalker replay(dist0, layer1({0.5, 0.5}), {2, 0});
  replay.advance(10'000);
  const auto& trace = replay.trace();
  std::int64_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < trace.trajectory().size(); ++i) {
    lo = std::min(lo, trace.trajectory().coord(i, 0));
    hi = std::max(hi, trace.trajectory().coord(i, 0));
  }
  for (std::size_t i = 0; i < run.path.size(); ++i) {
    ASSERT_GE(run.path.coord(i, 0), lo);
    ASSERT_LE(run.path.coord(i, 0), hi);
    if (i > 0) ASSERT_EQ(std::llabs(run.path.coord(i, 0) - run.path.coord(i - 1, 0)), 1);
  }
}

TEST(RunNestedWalk, Deterministic) {
  const auto dist0 = layer0(family_weights(2, 1, 4.0));
  const auto dist1 = layer1(family_weights(2, 1, 3.0));
  const auto a = run_nested_walk(dist0, dist1, 5000, {9, 4});
  const auto b = run_nested_walk(dist0, dist1, 5000, {9, 4});
  EXPECT_EQ(a.path, b.path);
  EXPECT_EQ(a.trace_vertices, b.trace_vertices);
  EXPECT_NE(a.path, run_nested_walk(dist0, dist1, 5000, {9, 5}).path);
}

TEST(RunNestedWalk, EveryStepUsesATraceEdge) {
  const auto dist0 = layer0({0.3, 0.2, 0.25, 0.25});
  const auto dist1 = layer1({0.1, 0.3, 0.45, 0.15});
  NestedWalker walker(dist0, dist1, {3, 3}, {.margin = 0.0, .min_extension = 50});
  LatticePosition prev = walker.position();
  for (int i = 0; i < 20'000; ++i) {
    const VertexId from = walker.vertex();
    walker.step();
    const Direction k = unit_step_between(prev, walker.position());
    ASSERT_GE(k, 0);
    // The edge was present before the step: trace edges are never removed.
    ASSERT_TRUE(walker.trace().mask(from).contains(k));
    ASSERT_EQ(walker.trace().neighbor(from, k), walker.vertex());
    ASSERT_NE(walker.vertex(), walker.trace().frontier());
    prev = walker.position();
  }
  EXPECT_GT(walker.extensions(), 1u);
}

TEST(RunNestedWalk, WeightAndConductanceLawsAgreeAtVisitedVertices) {
  const auto dist0 = layer0({0.35, 0.15, 0.1, 0.2, 0.1, 0.1});
  const auto dist1 = layer1({0.2, 0.1, 0.1, 0.3, 0.15, 0.15});
  const auto dir = analysis::conductance_direction(dist1);
  NestedWalker walker(dist0, dist1, {17, 0});
  for (int i = 0; i < 5000; ++i) {
    walker.step();
    const auto& g = walker.trace();
    const auto x = walker.position();
    const auto law = transition_probabilities(g, dist1, x);
    double log_max = -1e300;
    std::vector<double> logc;
    for (const Direction k : law.directions) {
      logc.push_back(analysis::log_edge_conductance(dist1, dir, x, x.step(k)));
      log_max = std::max(log_max, logc.back());
    }
    double total = 0.0;
    for (double& c : logc) total += (c = std::exp(c - log_max));
    for (std::size_t i2 = 0; i2 < logc.size(); ++i2) ASSERT_NEAR(logc[i2] / total, law.probabilities[i2], 1e-12);
  }
}

TEST(RunNestedWalk, VertexBudgetPropagates) {
  try {
    run_nested_walk(layer0({0.7, 0.3}), layer1({0.9, 0.1}), 100'000, {1, 0},
                    {.margin = 0.0, .min_extension = 1000, .vertex_budget = 2000});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::VertexBudgetExceeded);
  }
}

TEST(EstimateVelocity, RequiresTwoReplicas) {
  EXPECT_THROW(estimate_velocity(layer0({0.7, 0.3}), layer1({0.6, 0.4}), 100, 1, 1, 1), Error);
}

TEST(EstimateVelocity, IndependentOfWorkerCount) {
  const auto dist0 = layer0(family_weights(2, 1, 4.0));
  const auto dist1 = layer1(family_weights(2, 1, 3.0));
  const auto a = estimate_velocity(dist0, dist1, 20'000, 6, 123, 1);
  const auto b = estimate_velocity(dist0, dist1, 20'000, 6, 123, 3);
  EXPECT_EQ(a.parallel_samples, b.parallel_samples);
  EXPECT_EQ(a.vhat, b.vhat);
}

TEST(EstimateVelocity, BallisticDirectionAlongTraceDrift) {
  const auto dist0 = layer0(family_weights(2, 1, 4.0));
  const auto dist1 = layer1(family_weights(2, 1, 2.0));
  const auto v = estimate_velocity(dist0, dist1, 200'000, 16, 5, 1);
  EXPECT_GT(v.parallel, 5 * v.parallel_stderr);
  EXPECT_LT(v.orthogonal_norm, 3 * v.orthogonal_stderr);
  ASSERT_EQ(v.standard_error.size(), 2u);
  EXPECT_GE(v.standard_error[0], 0.0);
}

TEST(EstimateVelocity, OneDimensionalGeneratorDrivesSpeed) {
  // d=1 trace is an interval; X1 with beta=2 is a biased walk with a reflecting
  // left end, so its speed is (2/3 - 1/3) = 1/3.
  const auto v = estimate_velocity(layer0({0.7, 0.3}), layer1({2.0 / 3.0, 1.0 / 3.0}), 100'000, 16, 7, 1);
  EXPECT_NEAR(v.parallel, 1.0 / 3.0, 4 * v.parallel_stderr + 1e-3);
}

TEST(EstimateVelocity, BalancedOneDimensionalSpeedDecaysDiffusively) {
  // Simple random walk on a half-line: E X_n ~ sqrt(2n/pi), so v(4n)/v(n) -> 1/2.
  const auto profile = velocity_profile(layer0({0.7, 0.3}), layer1({0.5, 0.5}), {25'000, 100'000}, 400, 8, 1);
  const auto& shortrun = profile[0];
  const auto& longrun = profile[1];
  EXPECT_GT(shortrun.parallel, 3 * shortrun.parallel_stderr);
  EXPECT_GT(longrun.parallel, 3 * longrun.parallel_stderr);
  const double ratio = longrun.parallel / shortrun.parallel;
  EXPECT_GT(ratio, 0.35);
  EXPECT_LT(ratio, 0.65);
  EXPECT_NEAR(longrun.parallel, std::sqrt(2.0 / (M_PI * 100'000)), 4 * longrun.parallel_stderr + 5e-4);
}

TEST(VelocityProfile, RejectsBadHorizons) {
  const auto dist0 = layer0({0.7, 0.3});
  const auto dist1 = layer1({0.6, 0.4});
  EXPECT_THROW(velocity_profile(dist0, dist1, {}, 4, 1, 1), Error);
  EXPECT_THROW(velocity_profile(dist0, dist1, {100, 100}, 4, 1, 1), Error);
  EXPECT_THROW(velocity_profile(dist0, dist1, {0, 100}, 4, 1, 1), Error);
}
