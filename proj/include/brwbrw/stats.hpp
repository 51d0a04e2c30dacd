#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace brwbrw::stats {

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double sample_sd = 0.0;       // n-1 denominator
  double standard_error = 0.0;  // sample_sd / sqrt(n)
};

Summary summarize(std::span<const double> xs);

// y = intercept + slope x, weights 1/sigma^2. Parameter standard errors
// come from the inverse normal matrix (known per-point sigmas).
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double intercept_stderr = 0.0;
  double slope_stderr = 0.0;
  std::size_t points = 0;
};

LinearFit weighted_least_squares(std::span<const double> x, std::span<const double> y, std::span<const double> sigma);

// Sample median; the input is copied.
double median(std::span<const double> xs);

}  // namespace brwbrw::stats
