#pragma once

#include <cstdint>
#include <vector>

#include "brwbrw/lattice.hpp"
#include "brwbrw/rng.hpp"
#include "brwbrw/trace_graph.hpp"
#include "brwbrw/walk.hpp"

namespace brwbrw::nested {

struct NestedWalkOptions {
  // Extend the trace whenever the walker's projection on the trace drift
  // comes within this many lattice units of the frontier. <= 0 means 2d.
  double margin = 0.0;
  // Minimum generator steps per extension.
  std::uint64_t min_extension = 10'000;
  std::uint64_t vertex_budget = kDefaultVertexBudget;
};

// Conditional law of the next step at a trace vertex.
struct TransitionLaw {
  std::vector<Direction> directions;
  std::vector<double> probabilities;
};

// p1(e) / sum over available e' of p1(e'). Throws UnknownVertex, and
// FrontierNotExtended at the open end of an extensible trace.
TransitionLaw transition_probabilities(const TraceGraph& graph, const StepDistribution& dist1, const LatticePosition& x);

// Seeds used for one replica: the trace and the walk on it draw from
// separate streams derived from the replica seed.
RandomSeed trace_stream(RandomSeed seed);
RandomSeed walk_stream(RandomSeed seed);

// Walk X1 on a lazily extended trace of X0, one step at a time.
class NestedWalker {
 public:
  NestedWalker(const StepDistribution& dist0, const StepDistribution& dist1, RandomSeed seed,
               NestedWalkOptions options = {});

  void step();
  void advance(std::uint64_t steps) {
    for (std::uint64_t i = 0; i < steps; ++i) step();
  }

  const LatticePosition& position() const noexcept { return position_; }
  VertexId vertex() const noexcept { return vertex_; }
  std::uint64_t steps() const noexcept { return steps_; }
  const TraceGraph& trace() const noexcept { return trace_; }
  std::uint64_t extensions() const noexcept { return extensions_; }

 private:
  void ensure_margin();
  const double* law_for(std::uint16_t mask);

  StepDistribution dist1_;
  NestedWalkOptions options_;
  TraceGraph trace_;
  RandomStream rng_;
  std::vector<double> unit_drift_;  // drift(dist0) / |drift(dist0)|
  double drift_norm_;
  double projection_ = 0.0;
  double frontier_projection_ = 0.0;
  LatticePosition position_;
  VertexId vertex_;
  std::uint64_t steps_ = 0;
  std::uint64_t extensions_ = 0;
  int degree_;
  // Cumulative step law per adjacency mask, filled on first use.
  std::vector<double> laws_;
  std::vector<char> law_ready_;
};

struct NestedWalkRun {
  Trajectory path;
  std::size_t trace_vertices = 0;
  std::uint64_t trace_steps = 0;
  RandomSeed trace_seed;
  RandomSeed walk_seed;
};

NestedWalkRun run_nested_walk(const StepDistribution& dist0, const StepDistribution& dist1, std::uint64_t n,
                              RandomSeed seed, NestedWalkOptions options = {});

struct VelocityEstimate {
  std::uint64_t n = 0;
  std::size_t replicas = 0;
  std::vector<double> vhat;
  std::vector<double> standard_error;
  // Along drift(dist0)/|drift(dist0)|.
  double parallel = 0.0;
  double parallel_stderr = 0.0;
  // Norm of the mean orthogonal part, and sqrt of the summed variances of
  // its components' means.
  double orthogonal_norm = 0.0;
  double orthogonal_stderr = 0.0;
  // Per-replica X_n . u / n, in stream order.
  std::vector<double> parallel_samples;
};

// Endpoint estimator X_n / n over independent replicas (streams 0..replicas-1
// of `seed`). One estimate per horizon; all horizons come from the same runs.
std::vector<VelocityEstimate> velocity_profile(const StepDistribution& dist0, const StepDistribution& dist1,
                                               const std::vector<std::uint64_t>& horizons, std::size_t replicas,
                                               std::uint64_t seed, unsigned workers, NestedWalkOptions options = {});

VelocityEstimate estimate_velocity(const StepDistribution& dist0, const StepDistribution& dist1, std::uint64_t n,
                                   std::size_t replicas, std::uint64_t seed, unsigned workers,
                                   NestedWalkOptions options = {});

}  // namespace brwbrw::nested
