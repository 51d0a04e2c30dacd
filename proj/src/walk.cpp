#include "brwbrw/walk.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "brwbrw/error.hpp"

namespace brwbrw {

StepDistribution validate_distribution(std::span<const double> weights, Layer role) {
  if (weights.empty() || weights.size() % 2 != 0 || weights.size() / 2 > static_cast<std::size_t>(kMaxDimension)) {
    throw Error(ErrorCode::InvalidArgument,
                "expected 2d weights with 1 <= d <= " + std::to_string(kMaxDimension) + ", got " +
                    std::to_string(weights.size()));
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!std::isfinite(weights[k]) || weights[k] < 0.0) {
      throw Error(ErrorCode::NegativeWeight, "weight " + std::to_string(k) + " is " + std::to_string(weights[k]));
    }
    sum += weights[k];
  }
  if (std::fabs(sum - 1.0) > kNormalizationTolerance) {
    throw Error(ErrorCode::NotNormalized, "weights sum to " + std::to_string(sum));
  }

  StepDistribution dist;
  dist.layer_ = role;
  dist.weights_.assign(weights.begin(), weights.end());
  for (double& w : dist.weights_) w /= sum;

  if (role == Layer::LayerOne) {
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (dist.weights_[k] <= 0.0) {
        throw Error(ErrorCode::ZeroWeightLayerOne,
                    "layer-1 weight for direction " + std::to_string(k) + " must be positive");
      }
    }
  }
  if (role == Layer::LayerZero) {
    const double first = dist.weights_[0] - dist.weights_[1];
    if (!(first > 0.0)) {
      throw Error(ErrorCode::NonPositiveFirstDriftLayerZero,
                  "layer-0 drift along e1 is " + std::to_string(first));
    }
  }

  double acc = 0.0;
  dist.cumulative_.resize(dist.weights_.size());
  for (std::size_t k = 0; k < dist.weights_.size(); ++k) {
    acc += dist.weights_[k];
    dist.cumulative_[k] = acc;
    if (dist.weights_[k] > 0.0) dist.last_positive_ = static_cast<Direction>(k);
  }
  return dist;
}

std::vector<double> drift(const StepDistribution& dist) {
  std::vector<double> out(static_cast<std::size_t>(dist.dim()), 0.0);
  for (int j = 0; j < dist.dim(); ++j) {
    out[static_cast<std::size_t>(j)] = dist[direction_of(j, 1)] - dist[direction_of(j, -1)];
  }
  return out;
}

std::vector<double> family_weights(int dim, int k, double gamma) {
  if (dim < 1 || dim > kMaxDimension || k < 1 || k > dim) {
    throw Error(ErrorCode::InvalidArgument,
                "family needs 1 <= k <= d <= " + std::to_string(kMaxDimension) + " (d=" + std::to_string(dim) +
                    ", k=" + std::to_string(k) + ")");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InvalidArgument, "family gamma must be positive, got " + std::to_string(gamma));
  }
  const double norm = 2.0 * dim + k * (gamma - 1.0);
  std::vector<double> w(static_cast<std::size_t>(2 * dim), 1.0 / norm);
  for (int j = 0; j < k; ++j) w[static_cast<std::size_t>(direction_of(j, 1))] = gamma / norm;
  return w;
}

Trajectory sample_walk(const StepDistribution& dist, std::uint64_t n, RandomSeed seed) {
  RandomStream rng(seed);
  Trajectory path(dist.dim());
  path.reserve(n + 1);
  LatticePosition x(dist.dim());
  path.push_back(x);
  for (std::uint64_t i = 0; i < n; ++i) {
    const Direction k = dist.sample(rng);
    assert(std::llabs(x[axis_of(k)]) < std::numeric_limits<std::int64_t>::max() - 1);
    x = x.step(k);
    path.push_back(x);
  }
  return path;
}

}  // namespace brwbrw
