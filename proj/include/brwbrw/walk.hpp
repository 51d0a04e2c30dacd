#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "brwbrw/lattice.hpp"
#include "brwbrw/rng.hpp"

namespace brwbrw {

// Which rules a step distribution was validated against.
//   LayerZero: generator of the trace; drift must point into x1 > 0.
//   LayerOne:  walk on the trace; every direction must carry weight.
//   Generic:   only nonnegativity and normalization (tilted laws, test fixtures).
enum class Layer { LayerZero, LayerOne, Generic };

// Probability weights on the 2d signed unit vectors, ordered +e1, -e1, ...
class StepDistribution {
 public:
  StepDistribution() = default;

  int dim() const noexcept { return static_cast<int>(weights_.size() / 2); }
  Layer layer() const noexcept { return layer_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double operator[](Direction k) const noexcept { return weights_[static_cast<std::size_t>(k)]; }

  // Inverse-CDF draw of one direction.
  Direction sample(RandomStream& rng) const noexcept {
    const double u = rng.uniform();
    const int last = static_cast<int>(cumulative_.size()) - 1;
    for (int k = 0; k < last; ++k) {
      if (u < cumulative_[static_cast<std::size_t>(k)]) return k;
    }
    return last_positive_;
  }

  friend bool operator==(const StepDistribution& a, const StepDistribution& b) noexcept {
    return a.weights_ == b.weights_ && a.layer_ == b.layer_;
  }

 private:
  friend StepDistribution validate_distribution(std::span<const double> weights, Layer role);

  std::vector<double> weights_;
  std::vector<double> cumulative_;
  Direction last_positive_ = 0;
  Layer layer_ = Layer::Generic;
};

// Input tolerance on the weight sum; accepted weights are rescaled to sum to 1.
inline constexpr double kNormalizationTolerance = 1e-9;

StepDistribution validate_distribution(std::span<const double> weights, Layer role);

// Mean increment sum_e e p(e).
std::vector<double> drift(const StepDistribution& dist);

// Weights (1 + (gamma-1) 1{e in {+e1..+ek}}) / (2d + k(gamma-1)).
std::vector<double> family_weights(int dim, int k, double gamma);

// Length n+1 path from the origin with i.i.d. increments drawn from `dist`.
Trajectory sample_walk(const StepDistribution& dist, std::uint64_t n, RandomSeed seed);

}  // namespace brwbrw
