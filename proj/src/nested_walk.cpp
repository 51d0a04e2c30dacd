#include "brwbrw/nested_walk.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "brwbrw/error.hpp"
#include "brwbrw/parallel.hpp"
#include "brwbrw/stats.hpp"

namespace brwbrw::nested {

TransitionLaw transition_probabilities(const TraceGraph& graph, const StepDistribution& dist1, const LatticePosition& x) {
  const VertexId v = graph.id_of(x);
  if (graph.frontier_open() && v == graph.frontier()) {
    throw Error(ErrorCode::FrontierNotExtended, x.to_string() + " is the open end of the trace");
  }
  TransitionLaw law;
  double total = 0.0;
  const DirectionSet available = graph.mask(v);
  for (Direction k = 0; k < 2 * graph.dim(); ++k) {
    if (!available.contains(k)) continue;
    law.directions.push_back(k);
    law.probabilities.push_back(dist1[k]);
    total += dist1[k];
  }
  for (double& p : law.probabilities) p /= total;
  return law;
}

RandomSeed trace_stream(RandomSeed seed) { return {derive_seed(seed.seed, "trace"), seed.stream}; }
RandomSeed walk_stream(RandomSeed seed) { return {derive_seed(seed.seed, "walk"), seed.stream}; }

NestedWalker::NestedWalker(const StepDistribution& dist0, const StepDistribution& dist1, RandomSeed seed,
                           NestedWalkOptions options)
    : dist1_(dist1),
      options_(options),
      trace_(TraceGraph::generate(dist0, 0, trace_stream(seed), options.vertex_budget)),
      rng_(walk_stream(seed)),
      unit_drift_(drift(dist0)),
      position_(dist0.dim()),
      degree_(2 * dist0.dim()) {
  if (dist0.dim() != dist1.dim()) throw Error(ErrorCode::InvalidArgument, "layer dimensions differ");
  if (options_.margin <= 0.0) options_.margin = 2.0 * dist0.dim();
  if (options_.min_extension == 0) options_.min_extension = 1;
  drift_norm_ = 0.0;
  for (double c : unit_drift_) drift_norm_ += c * c;
  drift_norm_ = std::sqrt(drift_norm_);
  if (drift_norm_ == 0.0) throw Error(ErrorCode::InvalidArgument, "trace generator has zero drift");
  for (double& c : unit_drift_) c /= drift_norm_;
  vertex_ = trace_.frontier();
  laws_.assign((std::size_t{1} << degree_) * static_cast<std::size_t>(degree_), 0.0);
  law_ready_.assign(std::size_t{1} << degree_, 0);
  ensure_margin();
}

void NestedWalker::ensure_margin() {
  // The frontier's adjacency is incomplete until X0 moves on; keep X1 at
  // least `margin` behind it along the trace drift.
  for (;;) {
    const double gap = frontier_projection_ - projection_;
    if (gap > options_.margin && vertex_ != trace_.frontier()) return;
    const double deficit = std::ceil((options_.margin - gap + 1.0) / drift_norm_);
    trace_.extend(std::max<std::uint64_t>(options_.min_extension, static_cast<std::uint64_t>(2.0 * std::max(0.0, deficit))));
    ++extensions_;
    frontier_projection_ = trace_.trajectory().back().dot(unit_drift_);
  }
}

const double* NestedWalker::law_for(std::uint16_t mask) {
  double* cum = laws_.data() + static_cast<std::size_t>(mask) * static_cast<std::size_t>(degree_);
  if (!law_ready_[mask]) {
    double total = 0.0;
    for (Direction k = 0; k < degree_; ++k) {
      if (mask & (1u << k)) total += dist1_[k];
    }
    double acc = 0.0;
    for (Direction k = 0; k < degree_; ++k) {
      if (mask & (1u << k)) acc += dist1_[k] / total;
      cum[k] = acc;
    }
    law_ready_[mask] = 1;
  }
  return cum;
}

void NestedWalker::step() {
  const std::uint16_t mask = trace_.mask(vertex_).bits();
  assert(mask != 0);
  const double* cum = law_for(mask);
  const double u = rng_.uniform();
  Direction chosen = -1;
  for (Direction k = 0; k < degree_; ++k) {
    if ((mask & (1u << k)) == 0) continue;
    chosen = k;
    if (u < cum[k]) break;
  }
  const VertexId next = trace_.neighbor(vertex_, chosen);
  assert(next != kNoVertex);
  vertex_ = next;
  position_[axis_of(chosen)] += sign_of(chosen);
  projection_ += sign_of(chosen) * unit_drift_[static_cast<std::size_t>(axis_of(chosen))];
  ++steps_;
  if (frontier_projection_ - projection_ <= options_.margin || vertex_ == trace_.frontier()) ensure_margin();
}

NestedWalkRun run_nested_walk(const StepDistribution& dist0, const StepDistribution& dist1, std::uint64_t n,
                              RandomSeed seed, NestedWalkOptions options) {
  NestedWalker walker(dist0, dist1, seed, options);
  NestedWalkRun run;
  run.path = Trajectory(dist0.dim());
  run.path.reserve(n + 1);
  run.path.push_back(walker.position());
  for (std::uint64_t i = 0; i < n; ++i) {
    walker.step();
    run.path.push_back(walker.position());
  }
  run.trace_vertices = walker.trace().vertex_count();
  run.trace_steps = walker.trace().steps_consumed();
  run.trace_seed = trace_stream(seed);
  run.walk_seed = walk_stream(seed);
  return run;
}

std::vector<VelocityEstimate> velocity_profile(const StepDistribution& dist0, const StepDistribution& dist1,
                                               const std::vector<std::uint64_t>& horizons, std::size_t replicas,
                                               std::uint64_t seed, unsigned workers, NestedWalkOptions options) {
  if (replicas < 2) throw Error(ErrorCode::InvalidArgument, "velocity estimates need at least 2 replicas");
  if (horizons.empty()) throw Error(ErrorCode::InvalidArgument, "no horizons requested");
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    if (horizons[h] == 0 || (h > 0 && horizons[h] <= horizons[h - 1])) {
      throw Error(ErrorCode::InvalidArgument, "horizons must be positive and strictly increasing");
    }
  }
  const int d = dist0.dim();

  // endpoints[r][h] = X1 at horizons[h] for replica r.
  const auto endpoints = map_replicas(replicas, workers, [&](std::size_t r) {
    NestedWalker walker(dist0, dist1, RandomSeed{seed, r}, options);
    std::vector<LatticePosition> out;
    out.reserve(horizons.size());
    for (const std::uint64_t n : horizons) {
      walker.advance(n - walker.steps());
      out.push_back(walker.position());
    }
    return out;
  });

  auto unit = drift(dist0);
  double norm = 0.0;
  for (double c : unit) norm += c * c;
  norm = std::sqrt(norm);
  for (double& c : unit) c /= norm;

  std::vector<VelocityEstimate> estimates;
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    const double n = static_cast<double>(horizons[h]);
    VelocityEstimate est;
    est.n = horizons[h];
    est.replicas = replicas;
    std::vector<std::vector<double>> per_axis(static_cast<std::size_t>(d));
    std::vector<std::vector<double>> orthogonal(static_cast<std::size_t>(d));
    for (std::size_t r = 0; r < replicas; ++r) {
      const LatticePosition& x = endpoints[r][h];
      const double along = x.dot(unit) / n;
      est.parallel_samples.push_back(along);
      for (int j = 0; j < d; ++j) {
        const double v = static_cast<double>(x[j]) / n;
        per_axis[static_cast<std::size_t>(j)].push_back(v);
        orthogonal[static_cast<std::size_t>(j)].push_back(v - along * unit[static_cast<std::size_t>(j)]);
      }
    }
    double orth2 = 0.0, orth_var = 0.0;
    for (int j = 0; j < d; ++j) {
      const auto axis = stats::summarize(per_axis[static_cast<std::size_t>(j)]);
      est.vhat.push_back(axis.mean);
      est.standard_error.push_back(axis.standard_error);
      const auto o = stats::summarize(orthogonal[static_cast<std::size_t>(j)]);
      orth2 += o.mean * o.mean;
      orth_var += o.standard_error * o.standard_error;
    }
    const auto par = stats::summarize(est.parallel_samples);
    est.parallel = par.mean;
    est.parallel_stderr = par.standard_error;
    est.orthogonal_norm = std::sqrt(orth2);
    est.orthogonal_stderr = std::sqrt(orth_var);
    estimates.push_back(std::move(est));
  }
  return estimates;
}

VelocityEstimate estimate_velocity(const StepDistribution& dist0, const StepDistribution& dist1, std::uint64_t n,
                                   std::size_t replicas, std::uint64_t seed, unsigned workers,
                                   NestedWalkOptions options) {
  return velocity_profile(dist0, dist1, {n}, replicas, seed, workers, options).front();
}

}  // namespace brwbrw::nested
