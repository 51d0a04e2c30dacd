#include "brwbrw/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "brwbrw/error.hpp"
#include "brwbrw/parallel.hpp"
#include "brwbrw/stats.hpp"

namespace brwbrw::experiments {
namespace {

constexpr double kLatticeSlack = 1e-9;

// e_k . ell for every direction k.
std::vector<double> projections(const StepDistribution& dist, std::span<const double> ell) {
  if (static_cast<int>(ell.size()) != dist.dim()) {
    throw Error(ErrorCode::InvalidArgument, "ell has " + std::to_string(ell.size()) + " components, walk is " +
                                                std::to_string(dist.dim()) + "-dimensional");
  }
  std::vector<double> out(static_cast<std::size_t>(2 * dist.dim()));
  for (int k = 0; k < 2 * dist.dim(); ++k) {
    out[static_cast<std::size_t>(k)] = sign_of(k) * ell[static_cast<std::size_t>(axis_of(k))];
  }
  return out;
}

double walk_minimum(const StepDistribution& dist0, const std::vector<double>& proj, std::uint64_t n,
                    RandomStream& rng) {
  double pos = 0.0, lowest = 0.0;
  for (std::uint64_t m = 0; m < n; ++m) {
    pos += proj[static_cast<std::size_t>(dist0.sample(rng))];
    lowest = std::min(lowest, pos);
  }
  return lowest;
}

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -analysis::kInfinity) return a;
  return a + std::log1p(std::exp(b - a));
}

// log S_N at each checkpoint (increasing).
std::vector<double> log_resistance_at(const StepDistribution& dist0, const std::vector<double>& proj,
                                      double log_beta, const std::vector<std::uint64_t>& checkpoints,
                                      RandomSeed seed) {
  RandomStream rng(seed);
  std::vector<double> out;
  out.reserve(checkpoints.size());
  double pos = 0.0, log_s = 0.0;
  std::uint64_t m = 0;
  for (const std::uint64_t target : checkpoints) {
    for (; m < target; ++m) {
      pos += proj[static_cast<std::size_t>(dist0.sample(rng))];
      log_s = log_add(log_s, -log_beta * pos);
    }
    out.push_back(log_s);
  }
  return out;
}

void require_grid(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw Error(ErrorCode::DegenerateGrid, std::string(what) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i]) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw Error(ErrorCode::DegenerateGrid, std::string(what) + " grid must be positive and strictly increasing");
    }
  }
}

std::vector<double> unit_drift(const StepDistribution& dist0) {
  auto u = drift(dist0);
  double norm = 0.0;
  for (double c : u) norm += c * c;
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) throw Error(ErrorCode::InvalidArgument, "layer-0 drift is zero");
  for (double& c : u) c /= norm;
  return u;
}

}  // namespace

double backtrack_minimum(const StepDistribution& dist0, std::span<const double> ell, std::uint64_t n,
                         RandomSeed seed) {
  const auto proj = projections(dist0, ell);
  RandomStream rng(seed);
  return walk_minimum(dist0, proj, n, rng);
}

std::uint64_t saturation_horizon(const StepDistribution& dist0, std::span<const double> ell, double depth) {
  const double speed = analysis::dot(drift(dist0), ell);
  if (!(speed > 0.0)) throw Error(ErrorCode::NotTransient, "drift(dist0).ell <= 0, the minimum does not settle");
  // drift sums pick up ulp noise; don't let it round 1000 up to 1001
  const double steps = 50.0 * std::max(depth, 1.0) / speed;
  return static_cast<std::uint64_t>(std::ceil(steps * (1.0 - 1e-12)));
}

ExperimentReport estimate_backtrack_exponent(const StepDistribution& dist0, std::span<const double> ell,
                                             std::uint64_t n, std::size_t replicas, std::span<const double> x_grid,
                                             std::uint64_t seed, unsigned workers) {
  require_grid(x_grid, "x");
  if (replicas == 0) throw Error(ErrorCode::InvalidArgument, "replicas must be positive");
  if (n == 0) n = saturation_horizon(dist0, ell, x_grid.back());
  const auto proj = projections(dist0, ell);

  const auto minima = map_replicas(replicas, workers, [&](std::size_t r) {
    RandomStream rng(RandomSeed{seed, r});
    return walk_minimum(dist0, proj, n, rng);
  });

  ExperimentReport report;
  report.name = "backtrack";
  report.seed = seed;
  report.sample_count = replicas;
  report.columns = {"x", "hits", "probability", "stderr"};
  const double R = static_cast<double>(replicas);
  std::vector<double> fx, fy, fs;
  for (const double x : x_grid) {
    const auto hits = std::count_if(minima.begin(), minima.end(), [&](double m) { return m <= -x + kLatticeSlack; });
    const double p = static_cast<double>(hits) / R;
    report.rows.push_back({x, static_cast<double>(hits), p, std::sqrt(p * (1.0 - p) / R)});
    if (hits > 0) {
      fx.push_back(x);
      fy.push_back(-std::log(p));
      // Delta method on -log P; floored so that P == 1 keeps a finite weight.
      fs.push_back(std::max(std::sqrt((1.0 - p) / (p * R)), 1.0 / R));
    }
  }
  report.add("horizon", static_cast<double>(n));
  if (fx.empty()) {
    report.flags.push_back("infinite_exponent");
    report.add("slope", analysis::kInfinity);
  } else if (fx.size() < 2) {
    report.flags.push_back("insufficient_points");
    report.add("slope", std::nan(""));
  } else {
    const auto fit = stats::weighted_least_squares(fx, fy, fs);
    report.add("slope", fit.slope, fit.slope_stderr);
    report.add("intercept", fit.intercept, fit.intercept_stderr);
    report.add("fit_points", static_cast<double>(fit.points));
  }
  return report;
}

std::vector<double> EscapeSamples::raw() const {
  std::vector<double> out;
  out.reserve(minima.size());
  for (const double m : minima) out.push_back(std::exp(-log_beta * m));
  return out;
}

std::vector<double> EscapeSamples::smoothed() const {
  std::vector<double> out = raw();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= holding[i];
  return out;
}

EscapeSamples escape_tail_samples(const StepDistribution& dist0, std::span<const double> ell, double log_beta,
                                  std::uint64_t n, std::size_t replicas, std::uint64_t seed, unsigned workers) {
  if (!(log_beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "escape samples need log_beta > 0");
  const auto proj = projections(dist0, ell);
  if (n == 0) {
    const auto root = analysis::solve_alpha(dist0, ell);
    const double depth =
        root.finite() ? std::log(static_cast<double>(std::max<std::size_t>(replicas, 2))) / root.t_root + 5.0 : 1.0;
    n = saturation_horizon(dist0, ell, depth);
  }
  const std::uint64_t holding_seed = derive_seed(seed, "holding");

  struct Draw {
    double minimum = 0.0;
    double holding = 0.0;
  };
  const auto draws = map_replicas(replicas, workers, [&](std::size_t r) {
    RandomStream walk(RandomSeed{seed, r});
    RandomStream hold(RandomSeed{holding_seed, r});
    return Draw{walk_minimum(dist0, proj, n, walk), hold.exponential()};
  });

  EscapeSamples out;
  out.log_beta = log_beta;
  out.n = n;
  out.degenerate = log_beta < kDegenerateLogBeta;
  out.minima.reserve(replicas);
  out.holding.reserve(replicas);
  for (const auto& d : draws) {
    out.minima.push_back(d.minimum);
    out.holding.push_back(d.holding);
  }
  return out;
}

ExperimentReport hill_tail_index(std::span<const double> samples, std::size_t k) {
  const std::size_t N = samples.size();
  if (k == 0) k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(N))));
  if (k < 10 || N < 10 * k) {
    throw Error(ErrorCode::TooFewSamples,
                "Hill estimator needs k >= 10 and at least 10k samples (k=" + std::to_string(k) +
                    ", N=" + std::to_string(N) + ")");
  }
  for (const double s : samples) {
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "samples must be positive and finite");
  }
  const std::size_t keep = std::min(N, 2 * k + 1);
  std::vector<double> sorted(samples.begin(), samples.end());
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(keep), sorted.end(),
                    std::greater<>());

  auto hill = [&](std::size_t j) {
    double sum = 0.0;
    const double floor = std::log(sorted[j]);
    for (std::size_t i = 0; i < j; ++i) sum += std::log(sorted[i]) - floor;
    return sum > 0.0 ? static_cast<double>(j) / sum : analysis::kInfinity;
  };

  ExperimentReport report;
  report.name = "hill";
  report.sample_count = N;
  report.columns = {"k", "kappa", "stderr"};
  auto row = [&](std::size_t j) {
    const double kappa = hill(j);
    report.rows.push_back({static_cast<double>(j), kappa, kappa / std::sqrt(static_cast<double>(j))});
    return kappa;
  };
  if (k / 2 >= 1) {
    const double half = row(k / 2);
    report.add("kappa_k_half", half, half / std::sqrt(static_cast<double>(k / 2)));
  }
  const double kappa = row(k);
  report.add("kappa", kappa, kappa / std::sqrt(static_cast<double>(k)));
  report.add("k", static_cast<double>(k));
  if (2 * k < N) {
    const double twice = row(2 * k);
    report.add("kappa_2k", twice, twice / std::sqrt(static_cast<double>(2 * k)));
  }
  if (std::isinf(kappa)) report.flags.push_back("tied_order_statistics");
  return report;
}

std::vector<double> resistance_partial_sums(const StepDistribution& dist0, std::span<const double> ell,
                                            double log_beta, std::uint64_t n, RandomSeed seed) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "resistance sums need n >= 1");
  const auto proj = projections(dist0, ell);
  RandomStream rng(seed);
  std::vector<double> out;
  out.reserve(n + 1);
  double pos = 0.0, s = 1.0;
  out.push_back(s);
  for (std::uint64_t m = 0; m < n; ++m) {
    pos += proj[static_cast<std::size_t>(dist0.sample(rng))];
    s += std::exp(-log_beta * pos);
    if (!(s <= 1e300)) {
      throw Error(ErrorCode::Overflow, "resistance partial sum exceeds 1e300 at N=" + std::to_string(m + 1));
    }
    out.push_back(s);
  }
  return out;
}

std::vector<double> log_resistance_partial_sums(const StepDistribution& dist0, std::span<const double> ell,
                                                double log_beta, std::uint64_t n, RandomSeed seed) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "resistance sums need n >= 1");
  std::vector<std::uint64_t> all(n + 1);
  for (std::uint64_t m = 0; m <= n; ++m) all[m] = m;
  return log_resistance_at(dist0, projections(dist0, ell), log_beta, all, seed);
}

ExperimentReport resistance_growth(const StepDistribution& dist0, std::span<const double> ell, double log_beta,
                                   std::uint64_t n, std::size_t replicas, std::uint64_t seed, unsigned workers) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "resistance sums need n >= 1");
  if (replicas == 0) throw Error(ErrorCode::InvalidArgument, "replicas must be positive");
  const auto proj = projections(dist0, ell);
  const auto logs = map_replicas(replicas, workers, [&](std::size_t r) {
    return log_resistance_at(dist0, proj, log_beta, {n, 2 * n}, RandomSeed{seed, r});
  });

  ExperimentReport report;
  report.name = "resistance";
  report.seed = seed;
  report.sample_count = replicas;
  report.columns = {"replica", "log_S_N", "log_S_2N", "ratio"};
  std::vector<double> ratios;
  bool overflow = false;
  for (std::size_t r = 0; r < replicas; ++r) {
    const double ratio = std::exp(logs[r][1] - logs[r][0]);
    overflow = overflow || logs[r][1] > std::log(1e300);
    ratios.push_back(ratio);
    report.rows.push_back({static_cast<double>(r), logs[r][0], logs[r][1], ratio});
  }
  report.add("N", static_cast<double>(n));
  report.add("min_ratio", *std::min_element(ratios.begin(), ratios.end()));
  report.add("max_ratio", *std::max_element(ratios.begin(), ratios.end()));
  report.add("median_ratio", stats::median(ratios));
  if (overflow) report.flags.push_back("overflow");
  return report;
}

bool trap_event(const StepDistribution& dist0, const analysis::AnalyticProfile& profile, double h,
                const TrapGeometry& geometry, RandomSeed seed) {
  if (!profile.alpha || !std::isfinite(*profile.alpha) || !profile.doob) {
    throw Error(ErrorCode::AlphaInfinite, "trap events need a finite alpha");
  }
  const std::size_t d = static_cast<std::size_t>(dist0.dim());
  const double w = geometry.width;
  if (w < 1.0) return false;
  const auto& ell = profile.direction.ell;
  const auto up = unit_drift(dist0);
  auto down = profile.doob->drift;
  {
    double norm = 0.0;
    for (double c : down) norm += c * c;
    norm = std::sqrt(norm);
    for (double& c : down) c /= norm;
  }

  RandomStream rng(seed);
  std::vector<double> pos(d, 0.0);
  const double w2 = w * w + kLatticeSlack;
  auto phase = [&](const std::vector<double>& axis, double target) {
    const std::vector<double> start = pos;
    for (std::uint64_t m = 0; m < geometry.max_phase_steps; ++m) {
      const Direction k = dist0.sample(rng);
      pos[static_cast<std::size_t>(axis_of(k))] += sign_of(k);
      double along = 0.0, len2 = 0.0, rise = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double v = pos[j] - start[j];
        along += v * axis[j];
        len2 += v * v;
        rise += v * ell[j];
      }
      if (along < -w - kLatticeSlack || len2 - along * along > w2) return false;
      if (target > 0 ? rise >= target - kLatticeSlack : rise <= target + kLatticeSlack) return true;
    }
    return false;
  };
  return phase(up, h) && phase(down, -h) && phase(up, h);
}

ExperimentReport trap_event_frequency(const StepDistribution& dist0, const analysis::AnalyticProfile& profile,
                                      std::span<const double> h_grid, std::size_t replicas, std::uint64_t seed,
                                      TrapGeometry geometry, unsigned workers) {
  if (!profile.alpha || !std::isfinite(*profile.alpha) || !profile.doob) {
    throw Error(ErrorCode::AlphaInfinite, "trap events need a finite alpha");
  }
  require_grid(h_grid, "h");
  if (replicas == 0) throw Error(ErrorCode::InvalidArgument, "replicas must be positive");

  ExperimentReport report;
  report.name = "trap";
  report.seed = seed;
  report.sample_count = replicas;
  report.columns = {"h", "hits", "frequency", "stderr"};
  report.add("width", geometry.width);
  report.add("log_alpha", std::log(*profile.alpha));

  std::vector<std::size_t> hits(h_grid.size(), 0);
  if (geometry.width < 1.0) {
    report.flags.push_back("degenerate_geometry");
  } else {
    const auto events = map_replicas(replicas, workers, [&](std::size_t r) {
      std::vector<char> out(h_grid.size());
      for (std::size_t i = 0; i < h_grid.size(); ++i) out[i] = trap_event(dist0, profile, h_grid[i], geometry, {seed, r});
      return out;
    });
    for (const auto& e : events) {
      for (std::size_t i = 0; i < h_grid.size(); ++i) hits[i] += static_cast<std::size_t>(e[i]);
    }
  }

  const double R = static_cast<double>(replicas);
  std::vector<double> fx, fy, fs;
  for (std::size_t i = 0; i < h_grid.size(); ++i) {
    const double p = static_cast<double>(hits[i]) / R;
    report.rows.push_back({h_grid[i], static_cast<double>(hits[i]), p, std::sqrt(p * (1.0 - p) / R)});
    if (hits[i] > 0) {
      fx.push_back(h_grid[i]);
      fy.push_back(-std::log(p));
      fs.push_back(std::max(std::sqrt((1.0 - p) / (p * R)), 1.0 / R));
    }
  }
  if (fx.size() >= 2) {
    const auto fit = stats::weighted_least_squares(fx, fy, fs);
    report.add("slope", fit.slope, fit.slope_stderr);
  } else {
    report.flags.push_back("insufficient_points");
  }
  return report;
}

PotentialSeries cutpoint_potential(const TraceGraph& graph, std::span<const double> ell, double log_beta,
                                   std::uint64_t tail_margin) {
  if (!(log_beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "potential needs log_beta > 0");
  if (static_cast<int>(ell.size()) != graph.dim()) throw Error(ErrorCode::InvalidArgument, "ell dimension mismatch");
  auto cps = cut_points(graph);
  if (tail_margin > 0) cps = cps.without_tail(graph.trajectory().size(), tail_margin);
  PotentialSeries out;
  for (const auto& c : cps.points) {
    out.indices.push_back(c.trajectory_index);
    out.values.push_back(-log_beta * c.position.dot(ell));
  }
  return out;
}

ExperimentReport cutpoint_potential_trend(const StepDistribution& dist0, const StepDistribution& dist1,
                                          std::uint64_t n, std::uint64_t seed, std::uint64_t tail_margin) {
  const auto dir = analysis::conductance_direction(dist1);
  const auto graph = TraceGraph::generate(dist0, n, RandomSeed{seed, 0});
  const auto series = cutpoint_potential(graph, dir.ell, dir.log_beta, tail_margin);

  ExperimentReport report;
  report.name = "cutpoints";
  report.seed = seed;
  report.sample_count = series.values.size();
  report.columns = {"ordinal", "trajectory_index", "potential"};
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    report.rows.push_back({static_cast<double>(i), static_cast<double>(series.indices[i]), series.values[i]});
  }
  report.add("cut_points", static_cast<double>(series.values.size()));
  if (series.values.size() < 3) {
    report.flags.push_back("insufficient_points");
    return report;
  }
  // Unit weights, then rescale the errors by the residual scatter.
  std::vector<double> x(series.values.size()), ones(series.values.size(), 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
  const auto fit = stats::weighted_least_squares(x, series.values, ones);
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = series.values[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  const double scale = std::sqrt(rss / static_cast<double>(x.size() - 2));
  const double gap = static_cast<double>(series.indices.back() - series.indices.front()) /
                     static_cast<double>(series.indices.size() - 1);
  report.add("slope", fit.slope, fit.slope_stderr * scale);
  report.add("mean_index_gap", gap);
  report.add("expected_slope", -dir.log_beta * analysis::dot(drift(dist0), dir.ell) * gap);
  return report;
}

ExperimentReport fluctuation_exponent(const StepDistribution& dist0, const StepDistribution& dist1,
                                      const std::vector<std::uint64_t>& n_grid, std::size_t replicas,
                                      std::uint64_t seed, unsigned workers, nested::NestedWalkOptions options) {
  if (n_grid.size() < 4) {
    throw Error(ErrorCode::InsufficientGrid, "fluctuation probes need at least 4 horizons, got " +
                                                 std::to_string(n_grid.size()));
  }
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] == 0 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "horizons must be positive and strictly increasing");
    }
  }
  if (replicas < 100) throw Error(ErrorCode::InvalidArgument, "fluctuation probes need at least 100 replicas");
  const auto profile = analysis::classify(dist0, dist1);
  if (!profile.transient) throw Error(ErrorCode::NotTransient, "fluctuation probes need a transient parameter set");
  const double kappa = *profile.kappa;
  const auto u = unit_drift(dist0);

  // along[r][i] = X1_{n_i} . u for replica r.
  const auto along = map_replicas(replicas, workers, [&](std::size_t r) {
    nested::NestedWalker walker(dist0, dist1, RandomSeed{seed, r}, options);
    std::vector<double> out;
    for (const std::uint64_t n : n_grid) {
      walker.advance(n - walker.steps());
      out.push_back(walker.position().dot(u));
    }
    return out;
  });

  const bool centered = kappa > 1.0;
  double speed = 0.0;
  if (centered) {
    for (const auto& a : along) speed += a.back();
    speed /= static_cast<double>(replicas) * static_cast<double>(n_grid.back());
  }

  ExperimentReport report;
  report.name = "fluctuations";
  report.seed = seed;
  report.sample_count = replicas;
  report.flags = {"exploratory", "conjecture"};
  report.columns = {"n", "median", "log_median", "bootstrap_sigma"};

  constexpr std::size_t kBootstrap = 200;
  const std::uint64_t boot_seed = derive_seed(seed, "bootstrap");
  std::vector<double> fx, fy, fs;
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const double n = static_cast<double>(n_grid[i]);
    std::vector<double> values(replicas);
    for (std::size_t r = 0; r < replicas; ++r) {
      values[r] = centered ? std::abs(along[r][i] - n * speed) : along[r][i];
    }
    const double med = stats::median(values);
    std::vector<double> boot(kBootstrap);
    std::vector<double> resample(replicas);
    for (std::size_t b = 0; b < kBootstrap; ++b) {
      RandomStream rng(RandomSeed{boot_seed, i * kBootstrap + b});
      std::uniform_int_distribution<std::size_t> pick(0, replicas - 1);
      for (auto& v : resample) v = values[pick(rng)];
      boot[b] = stats::median(resample);
    }
    const bool positive = med > 0.0 && std::all_of(boot.begin(), boot.end(), [](double m) { return m > 0.0; });
    double sigma = std::nan("");
    if (positive) {
      for (double& m : boot) m = std::log(m);
      sigma = stats::summarize(boot).sample_sd;
      fx.push_back(std::log(n));
      fy.push_back(std::log(med));
      fs.push_back(std::max(sigma, 1e-6));
    }
    report.rows.push_back({n, med, med > 0.0 ? std::log(med) : std::nan(""), sigma});
  }

  report.add("kappa", kappa);
  report.add("centered", centered ? 1.0 : 0.0);
  report.add("conjectured_exponent", kappa < 1.0 ? kappa : (kappa < 2.0 ? 1.0 / kappa : 0.5));
  if (centered) report.add("speed", speed);
  if (fx.size() >= 2) {
    const auto fit = stats::weighted_least_squares(fx, fy, fs);
    report.add("slope", fit.slope, fit.slope_stderr);
  } else {
    report.flags.push_back("nonpositive_medians");
  }
  return report;
}

ExperimentReport velocity_report(const StepDistribution& dist0, const StepDistribution& dist1,
                                 const std::vector<std::uint64_t>& horizons, std::size_t replicas,
                                 std::uint64_t seed, unsigned workers, nested::NestedWalkOptions options) {
  const auto profile = nested::velocity_profile(dist0, dist1, horizons, replicas, seed, workers, options);
  const int d = dist0.dim();
  ExperimentReport report;
  report.name = "velocity";
  report.seed = seed;
  report.sample_count = replicas;
  report.columns = {"n", "parallel", "parallel_stderr", "orthogonal_norm", "orthogonal_stderr"};
  for (int j = 0; j < d; ++j) report.columns.push_back("v" + std::to_string(j + 1));
  for (int j = 0; j < d; ++j) report.columns.push_back("stderr" + std::to_string(j + 1));
  for (const auto& est : profile) {
    std::vector<double> row = {static_cast<double>(est.n), est.parallel, est.parallel_stderr, est.orthogonal_norm,
                               est.orthogonal_stderr};
    row.insert(row.end(), est.vhat.begin(), est.vhat.end());
    row.insert(row.end(), est.standard_error.begin(), est.standard_error.end());
    report.rows.push_back(std::move(row));
  }
  const auto& last = profile.back();
  report.add("parallel", last.parallel, last.parallel_stderr);
  report.add("orthogonal_norm", last.orthogonal_norm, last.orthogonal_stderr);
  for (int j = 0; j < d; ++j) {
    report.add("v" + std::to_string(j + 1), last.vhat[static_cast<std::size_t>(j)],
               last.standard_error[static_cast<std::size_t>(j)]);
  }
  return report;
}

}  // namespace brwbrw::experiments
