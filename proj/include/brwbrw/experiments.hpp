#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "brwbrw/analysis.hpp"
#include "brwbrw/nested_walk.hpp"
#include "brwbrw/report.hpp"
#include "brwbrw/rng.hpp"
#include "brwbrw/trace_graph.hpp"
#include "brwbrw/walk.hpp"

namespace brwbrw::experiments {

// Replica r of every experiment draws from RandomSeed{seed, r}.

// min over 0 <= m <= n of X0_m . ell for one walk; always <= 0.
double backtrack_minimum(const StepDistribution& dist0, std::span<const double> ell, std::uint64_t n, RandomSeed seed);

// n per replica for which the running minimum has settled down to depth
// `depth`: ceil(50 * depth / (drift.ell)). Throws NotTransient if drift.ell <= 0.
std::uint64_t saturation_horizon(const StepDistribution& dist0, std::span<const double> ell, double depth);

// Empirical P(min <= -x) per x, binomial standard errors, and a weighted
// fit of -log P against x whose slope estimates log alpha. n == 0 picks the
// saturation horizon for max(x). Points with no hits are left out of the
// fit; if every point has no hits the exponent is reported as +inf.
// Throws DegenerateGrid for an empty, non-positive or non-increasing grid.
ExperimentReport estimate_backtrack_exponent(const StepDistribution& dist0, std::span<const double> ell,
                                             std::uint64_t n, std::size_t replicas, std::span<const double> x_grid,
                                             std::uint64_t seed, unsigned workers = 1);

struct EscapeSamples {
  double log_beta = 0.0;
  std::uint64_t n = 0;
  std::vector<double> minima;   // per replica running minimum of X0 . ell
  std::vector<double> holding;  // per replica Exp(1) draw
  bool degenerate = false;      // log_beta too small for the samples to leave 1

  // beta^{-min}; every value >= 1.
  std::vector<double> raw() const;
  // Exp(1) * beta^{-min}. Multiplying by an independent light-tailed holding
  // time keeps the tail index and removes the lattice ripple of raw().
  std::vector<double> smoothed() const;
};

inline constexpr double kDegenerateLogBeta = 1e-6;

// Throws InvalidArgument unless log_beta > 0. n == 0 picks a saturation
// horizon deep enough for the largest expected minimum among the replicas.
EscapeSamples escape_tail_samples(const StepDistribution& dist0, std::span<const double> ell, double log_beta,
                                  std::uint64_t n, std::size_t replicas, std::uint64_t seed, unsigned workers = 1);

// Hill estimator on the k largest samples, stderr kappa/sqrt(k). k == 0
// means ceil(sqrt(N)). Estimates at k/2 and 2k are added when admissible.
// Throws TooFewSamples when N < 10k or k < 10.
ExperimentReport hill_tail_index(std::span<const double> samples, std::size_t k = 0);

// S_N = sum_{m <= N} beta^{-X0_m . ell} for N = 0..n. Throws Overflow once
// a partial sum exceeds 1e300.
std::vector<double> resistance_partial_sums(const StepDistribution& dist0, std::span<const double> ell,
                                            double log_beta, std::uint64_t n, RandomSeed seed);

// Same series as log S_N; never overflows.
std::vector<double> log_resistance_partial_sums(const StepDistribution& dist0, std::span<const double> ell,
                                                double log_beta, std::uint64_t n, RandomSeed seed);

// S_{2N}/S_N for each replica, from the log series.
ExperimentReport resistance_growth(const StepDistribution& dist0, std::span<const double> ell, double log_beta,
                                   std::uint64_t n, std::size_t replicas, std::uint64_t seed, unsigned workers = 1);

struct TrapGeometry {
  double width = 3.0;                   // Euclidean half-width orthogonal to the phase axis
  std::uint64_t max_phase_steps = 1'000'000;
};

// Three-phase trap event on fresh walks of dist0: up h along drift0, down h
// along the Doob drift, up h along drift0, each inside its own cylinder. The
// same replica streams are reused for every h. Throws AlphaInfinite.
ExperimentReport trap_event_frequency(const StepDistribution& dist0, const analysis::AnalyticProfile& profile,
                                      std::span<const double> h_grid, std::size_t replicas, std::uint64_t seed,
                                      TrapGeometry geometry = {}, unsigned workers = 1);

// True when the walk from `seed` completes all three phases at depth h.
bool trap_event(const StepDistribution& dist0, const analysis::AnalyticProfile& profile, double h,
                const TrapGeometry& geometry, RandomSeed seed);

struct PotentialSeries {
  std::vector<std::uint64_t> indices;
  std::vector<double> values;
};

// -log(beta) * (X0_c . ell) at the cut-points c of the trace, in trajectory
// order. Throws InvalidArgument unless log_beta > 0.
PotentialSeries cutpoint_potential(const TraceGraph& graph, std::span<const double> ell, double log_beta,
                                   std::uint64_t tail_margin = 0);

// Builds an n-step trace and fits the potential against cut-point ordinal.
ExperimentReport cutpoint_potential_trend(const StepDistribution& dist0, const StepDistribution& dist1,
                                          std::uint64_t n, std::uint64_t seed, std::uint64_t tail_margin = 0);

// Exploratory scaling probe. kappa < 1: slope of log median(X1_n . u) vs
// log n, u = drift0/|drift0|. kappa > 1: same for |X1_n . u - n s| with s
// the mean speed at the largest n. Throws InsufficientGrid below 4 points,
// InvalidArgument for fewer than 100 replicas or a non-increasing grid.
ExperimentReport fluctuation_exponent(const StepDistribution& dist0, const StepDistribution& dist1,
                                      const std::vector<std::uint64_t>& n_grid, std::size_t replicas,
                                      std::uint64_t seed, unsigned workers = 1,
                                      nested::NestedWalkOptions options = {});

ExperimentReport velocity_report(const StepDistribution& dist0, const StepDistribution& dist1,
                                 const std::vector<std::uint64_t>& horizons, std::size_t replicas,
                                 std::uint64_t seed, unsigned workers = 1, nested::NestedWalkOptions options = {});

}  // namespace brwbrw::experiments
