#include "brwbrw/stats.hpp"

#include <algorithm>
#include <cmath>

#include "brwbrw/error.hpp"

namespace brwbrw::stats {

Summary summarize(std::span<const double> xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  // Welford.
  double mean = 0.0, m2 = 0.0;
  std::size_t n = 0;
  for (const double x : xs) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  s.mean = mean;
  if (n > 1) {
    s.sample_sd = std::sqrt(m2 / static_cast<double>(n - 1));
    s.standard_error = s.sample_sd / std::sqrt(static_cast<double>(n));
  }
  return s;
}

LinearFit weighted_least_squares(std::span<const double> x, std::span<const double> y, std::span<const double> sigma) {
  if (x.size() != y.size() || x.size() != sigma.size()) {
    throw Error(ErrorCode::InvalidArgument, "fit inputs differ in length");
  }
  if (x.size() < 2) throw Error(ErrorCode::InvalidArgument, "a line fit needs at least two points");
  double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(sigma[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "fit sigmas must be positive");
    const double w = 1.0 / (sigma[i] * sigma[i]);
    sw += w;
    swx += w * x[i];
    swy += w * y[i];
    swxx += w * x[i] * x[i];
    swxy += w * x[i] * y[i];
  }
  const double det = sw * swxx - swx * swx;
  if (!(det > 0.0)) throw Error(ErrorCode::InvalidArgument, "degenerate abscissae");
  LinearFit fit;
  fit.points = x.size();
  fit.slope = (sw * swxy - swx * swy) / det;
  fit.intercept = (swxx * swy - swx * swxy) / det;
  fit.slope_stderr = std::sqrt(sw / det);
  fit.intercept_stderr = std::sqrt(swxx / det);
  return fit;
}

double median(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCode::InvalidArgument, "median of empty sample");
  std::vector<double> v(xs.begin(), xs.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace brwbrw::stats
