#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "brwbrw/analysis.hpp"
#include "brwbrw/error.hpp"
#include "brwbrw/experiments.hpp"
#include "brwbrw/report.hpp"
#include "brwbrw/walk.hpp"

using namespace brwbrw;
using namespace brwbrw::experiments;

namespace {

StepDistribution layer0(std::vector<double> w) { return validate_distribution(w, Layer::LayerZero); }
StepDistribution layer1(std::vector<double> w) { return validate_distribution(w, Layer::LayerOne); }

const std::vector<double> kE1 = {1.0};

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::InvalidArgument;
}

}  // namespace

// Gambler's ruin for the (0.7, 0.3) walk: P(min <= -x) = (3/7)^x.
constexpr double kRuin1 = 0.42857142857142855;
constexpr double kRuin2 = 0.18367346938775508;
constexpr double kLogSevenThirds = 0.847297860387203614;
constexpr double kTailIndexBetaTwo = 1.22239242133644793;  // log(7/3)/log 2

TEST(BacktrackMinimum, ForwardOnlyWalkNeverBacktracks) {
  EXPECT_EQ(backtrack_minimum(layer0({1.0, 0.0}), kE1, 1000, {3, 0}), 0.0);
}

TEST(BacktrackMinimum, MatchesSampledPath) {
  const auto dist = layer0({0.7, 0.3});
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto path = sample_walk(dist, 200, {11, s});
    std::int64_t lo = 0;
    for (std::size_t i = 0; i < path.size(); ++i) lo = std::min(lo, path.coord(i, 0));
    EXPECT_EQ(backtrack_minimum(dist, kE1, 200, {11, s}), static_cast<double>(lo));
  }
}

TEST(BacktrackMinimum, SingleBackStep) {
  const auto dist = layer0({0.7, 0.3});
  int found = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto path = sample_walk(dist, 1, {5, s});
    if (path.coord(1, 0) == -1) {
      EXPECT_EQ(backtrack_minimum(dist, kE1, 1, {5, s}), -1.0);
      ++found;
    }
  }
  EXPECT_GT(found, 0);
}

TEST(SaturationHorizon, FiftyDepthsOverProjectedDrift) {
  EXPECT_EQ(saturation_horizon(layer0({0.7, 0.3}), kE1, 8.0), 1000u);
  EXPECT_EQ(code_of([] { saturation_horizon(layer0({0.7, 0.3}), std::vector<double>{-1.0}, 8.0); }),
            ErrorCode::NotTransient);
}

TEST(BacktrackExponent, GamblersRuinPointwiseAndSlope) {
  const std::vector<double> xs = {1, 2, 3, 4, 5, 6};
  const auto report = estimate_backtrack_exponent(layer0({0.7, 0.3}), kE1, 0, 20'000, xs, 17, 1);
  EXPECT_EQ(report.sample_count, 20'000u);
  EXPECT_EQ(report.seed, 17u);
  const auto p = report.column("probability");
  const auto se = report.column("stderr");
  ASSERT_EQ(p.size(), xs.size());
  EXPECT_NEAR(p[0], kRuin1, 4 * se[0]);
  EXPECT_NEAR(p[1], kRuin2, 4 * se[1]);
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(p[i], std::pow(3.0 / 7.0, xs[i]), 4 * se[i]);
  const auto& slope = report.estimate("slope");
  EXPECT_NEAR(slope.value, kLogSevenThirds, 3 * slope.standard_error);
}

TEST(BacktrackExponent, ForwardOnlyFlagsInfiniteExponent) {
  const std::vector<double> xs = {1, 2, 3};
  const auto report = estimate_backtrack_exponent(layer0({1.0, 0.0}), kE1, 0, 500, xs, 1, 1);
  EXPECT_TRUE(report.has_flag("infinite_exponent"));
  EXPECT_TRUE(std::isinf(report.estimate("slope").value));
  for (const double p : report.column("probability")) EXPECT_EQ(p, 0.0);
}

TEST(BacktrackExponent, RejectsDegenerateGrid) {
  const auto dist = layer0({0.7, 0.3});
  EXPECT_EQ(code_of([&] { estimate_backtrack_exponent(dist, kE1, 10, 10, std::vector<double>{}, 1); }),
            ErrorCode::DegenerateGrid);
  EXPECT_EQ(code_of([&] { estimate_backtrack_exponent(dist, kE1, 10, 10, std::vector<double>{2, 1}, 1); }),
            ErrorCode::DegenerateGrid);
  EXPECT_EQ(code_of([&] { estimate_backtrack_exponent(dist, kE1, 10, 10, std::vector<double>{0, 1}, 1); }),
            ErrorCode::DegenerateGrid);
}

TEST(BacktrackExponent, IndependentOfWorkers) {
  const std::vector<double> xs = {1, 2};
  const auto a = estimate_backtrack_exponent(layer0({0.7, 0.3}), kE1, 100, 300, xs, 2, 1);
  const auto b = estimate_backtrack_exponent(layer0({0.7, 0.3}), kE1, 100, 300, xs, 2, 4);
  EXPECT_EQ(a.rows, b.rows);
}

TEST(EscapeSamples, ZeroMinimumGivesOne) {
  const auto s = escape_tail_samples(layer0({1.0, 0.0}), kE1, std::log(2.0), 100, 50, 3, 1);
  for (const double v : s.raw()) EXPECT_EQ(v, 1.0);
  EXPECT_FALSE(s.degenerate);
}

TEST(EscapeSamples, RawAtLeastOneAndDegenerateFlag) {
  const auto s = escape_tail_samples(layer0({0.7, 0.3}), kE1, std::log1p(1e-9), 500, 200, 3, 1);
  EXPECT_TRUE(s.degenerate);
  for (const double v : s.raw()) {
    EXPECT_GE(v, 1.0);
    EXPECT_NEAR(v, 1.0, 1e-6);
  }
  EXPECT_EQ(code_of([] { escape_tail_samples(layer0({0.7, 0.3}), kE1, 0.0, 10, 10, 1); }),
            ErrorCode::InvalidArgument);
}

TEST(EscapeSamples, MinimaMatchBacktrack) {
  const auto dist = layer0({0.7, 0.3});
  const auto s = escape_tail_samples(dist, kE1, std::log(2.0), 300, 20, 9, 1);
  for (std::uint64_t r = 0; r < 20; ++r) EXPECT_EQ(s.minima[r], backtrack_minimum(dist, kE1, 300, {9, r}));
  const auto raw = s.raw();
  const auto smooth = s.smoothed();
  for (std::size_t r = 0; r < raw.size(); ++r) EXPECT_DOUBLE_EQ(smooth[r], raw[r] * s.holding[r]);
}

TEST(HillTailIndex, HandComputedSample) {
  // Top 10 are e^2, the 11th is e: mean log-excess 1, kappa 1.
  std::vector<double> samples(100, 1.0);
  for (int i = 0; i < 10; ++i) samples[static_cast<std::size_t>(i)] = std::exp(2.0);
  samples[10] = std::exp(1.0);
  const auto report = hill_tail_index(samples, 10);
  EXPECT_NEAR(report.estimate("kappa").value, 1.0, 1e-12);
  EXPECT_NEAR(report.estimate("kappa").standard_error, 1.0 / std::sqrt(10.0), 1e-12);
}

TEST(HillTailIndex, SyntheticParetoCalibration) {
  RandomStream rng({2024, 0});
  std::vector<double> samples(100'000);
  for (auto& s : samples) s = std::pow(rng.uniform_open_zero(), -1.0 / 1.5);
  const auto report = hill_tail_index(samples, 316);
  const auto& k = report.estimate("kappa");
  EXPECT_NEAR(k.value, 1.5, 3 * k.standard_error);
  EXPECT_TRUE(report.has_estimate("kappa_k_half"));
  EXPECT_TRUE(report.has_estimate("kappa_2k"));
}

TEST(HillTailIndex, DefaultKIsCeilSqrtN) {
  std::vector<double> samples(1000);
  RandomStream rng({1, 1});
  for (auto& s : samples) s = 1.0 / rng.uniform_open_zero();
  EXPECT_EQ(hill_tail_index(samples).estimate("k").value, 32.0);
}

TEST(HillTailIndex, TooFewSamples) {
  std::vector<double> samples(99, 2.0);
  EXPECT_EQ(code_of([&] { hill_tail_index(samples, 10); }), ErrorCode::TooFewSamples);
  std::vector<double> many(1000, 2.0);
  EXPECT_EQ(code_of([&] { hill_tail_index(many, 9); }), ErrorCode::TooFewSamples);
}

TEST(HillTailIndex, SmoothedEscapeSamplesRecoverClosedForm) {
  const auto s = escape_tail_samples(layer0({0.7, 0.3}), kE1, std::log(2.0), 0, 40'000, 77, 1);
  const auto report = hill_tail_index(s.smoothed());
  const auto& k = report.estimate("kappa");
  EXPECT_NEAR(k.value, kTailIndexBetaTwo, 3 * k.standard_error);
}

TEST(ResistanceSums, UnbiasedLayerGivesCount) {
  const auto s = resistance_partial_sums(layer0({0.7, 0.3}), kE1, 0.0, 1000, {1, 0});
  ASSERT_EQ(s.size(), 1001u);
  for (std::size_t n = 0; n < s.size(); ++n) EXPECT_EQ(s[n], static_cast<double>(n + 1));
  const auto logs = log_resistance_partial_sums(layer0({0.7, 0.3}), kE1, 0.0, 1000, {1, 0});
  EXPECT_NEAR(logs.back(), std::log(1001.0), 1e-12);
}

TEST(ResistanceSums, LogAndLinearAgree) {
  const auto dist = layer0({0.6, 0.4});
  const auto s = resistance_partial_sums(dist, kE1, std::log(2.0), 5000, {8, 2});
  const auto logs = log_resistance_partial_sums(dist, kE1, std::log(2.0), 5000, {8, 2});
  for (std::size_t n = 0; n < s.size(); n += 97) EXPECT_NEAR(std::log(s[n]), logs[n], 1e-12);
  for (std::size_t n = 1; n < s.size(); ++n) ASSERT_GE(s[n], s[n - 1]);
}

TEST(ResistanceSums, OverflowOnDivergence) {
  EXPECT_EQ(code_of([] {
              resistance_partial_sums(layer0({0.7, 0.3}), std::vector<double>{-1.0}, std::log(8.0), 100'000, {1, 0});
            }),
            ErrorCode::Overflow);
}

TEST(ResistanceGrowth, DichotomyOneDimension) {
  const auto transient = resistance_growth(layer0({0.7, 0.3}), kE1, std::log(2.0), 10'000, 10, 4, 1);
  EXPECT_LT(transient.estimate("max_ratio").value, 1.01);
  const auto recurrent = resistance_growth(layer0({0.7, 0.3}), std::vector<double>{-1.0}, std::log(2.0), 1000, 10, 4, 1);
  EXPECT_GT(recurrent.estimate("min_ratio").value, 1.5);
}

TEST(TrapEvent, AlphaInfiniteRejected) {
  const auto dist0 = layer0({0.5, 0.0, 0.25, 0.25});
  const auto profile = analysis::classify(dist0, layer1(family_weights(2, 1, 3.0)));
  ASSERT_TRUE(profile.alpha.has_value());
  ASSERT_TRUE(std::isinf(*profile.alpha));
  const std::vector<double> hs = {2};
  EXPECT_EQ(code_of([&] { trap_event_frequency(dist0, profile, hs, 10, 1); }), ErrorCode::AlphaInfinite);
}

TEST(TrapEvent, NarrowCylinderIsDegenerate) {
  const auto dist0 = layer0(family_weights(2, 1, 4.0));
  const auto profile = analysis::classify(dist0, layer1(family_weights(2, 1, 3.0)));
  const std::vector<double> hs = {2, 3};
  const auto report = trap_event_frequency(dist0, profile, hs, 100, 1, {.width = 0.0});
  EXPECT_TRUE(report.has_flag("degenerate_geometry"));
  for (const double f : report.column("frequency")) EXPECT_EQ(f, 0.0);
}

TEST(TrapEvent, FrequencyDecreasesWithDepthAndWidth) {
  const auto dist0 = layer0(family_weights(2, 1, 4.0));
  const auto profile = analysis::classify(dist0, layer1(family_weights(2, 1, 3.0)));
  const std::vector<double> hs = {1, 2, 3};
  const auto wide = trap_event_frequency(dist0, profile, hs, 40'000, 5, {.width = 3.0});
  const auto narrow = trap_event_frequency(dist0, profile, hs, 40'000, 5, {.width = 1.5});
  const auto fw = wide.column("frequency");
  const auto fn = narrow.column("frequency");
  EXPECT_GT(fw[0], fw[1]);
  EXPECT_GT(fw[1], fw[2]);
  for (std::size_t i = 0; i < hs.size(); ++i) EXPECT_LE(fn[i], fw[i]);
}

TEST(CutpointPotential, MonotonePathExample) {
  Trajectory path;
  for (int i = 0; i <= 3; ++i) path.push_back(LatticePosition({i}));
  const auto g = build_trace(path);
  const auto series = cutpoint_potential(g, kE1, std::log(2.0));
  ASSERT_EQ(series.values.size(), 2u);
  EXPECT_EQ(series.indices, (std::vector<std::uint64_t>{1, 2}));
  EXPECT_DOUBLE_EQ(series.values[0], -std::log(2.0));
  EXPECT_DOUBLE_EQ(series.values[1], -2 * std::log(2.0));
  EXPECT_EQ(code_of([&] { cutpoint_potential(g, kE1, 0.0); }), ErrorCode::InvalidArgument);
}

TEST(CutpointPotential, TrendMatchesDriftTimesGap) {
  const auto report = cutpoint_potential_trend(layer0({0.7, 0.3}), layer1({2.0 / 3.0, 1.0 / 3.0}), 100'000, 12);
  const double slope = report.estimate("slope").value;
  const double expected = report.estimate("expected_slope").value;
  EXPECT_LT(slope, 0.0);
  EXPECT_NEAR(slope, expected, 0.05 * std::abs(expected));
}

TEST(FluctuationExponent, GridAndReplicaChecks) {
  const auto dist0 = layer0(family_weights(2, 1, 4.0));
  const auto dist1 = layer1(family_weights(2, 1, 16.0));
  EXPECT_EQ(code_of([&] { fluctuation_exponent(dist0, dist1, {100, 1000}, 100, 1); }), ErrorCode::InsufficientGrid);
  EXPECT_EQ(code_of([&] { fluctuation_exponent(dist0, dist1, {1, 2, 3, 4}, 10, 1); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { fluctuation_exponent(dist0, dist1, {1, 3, 2, 4}, 100, 1); }), ErrorCode::InvalidArgument);
}

TEST(FluctuationExponent, ReportIsTaggedExploratory) {
  const auto report = fluctuation_exponent(layer0(family_weights(2, 1, 4.0)), layer1(family_weights(2, 1, 16.0)),
                                           {500, 1000, 2000, 4000}, 100, 3);
  EXPECT_TRUE(report.has_flag("exploratory"));
  EXPECT_NEAR(report.estimate("kappa").value, 0.5, 1e-12);
  EXPECT_EQ(report.rows.size(), 4u);
}

TEST(VelocityReport, CarriesTable) {
  const auto report = velocity_report(layer0({0.7, 0.3}), layer1({2.0 / 3.0, 1.0 / 3.0}), {1000, 2000}, 4, 1);
  EXPECT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.columns.size(), 7u);
  EXPECT_EQ(report.sample_count, 4u);
}

TEST(Report, NonFiniteNumbersRoundTrip) {
  EXPECT_EQ(json_number(analysis::kInfinity), "inf");
  EXPECT_TRUE(std::isinf(number_from_json("inf")));
  EXPECT_TRUE(std::isnan(number_from_json(json_number(std::nan("")))));
  EXPECT_EQ(number_from_json(json_number(0.25)), 0.25);
}

TEST(Report, CsvQuotingAndLineEnds) {
  std::ostringstream out;
  write_csv(out, {"a", "b,c"}, {{"1", "say \"hi\""}});
  EXPECT_EQ(out.str(), "a,\"b,c\"\r\n1,\"say \"\"hi\"\"\"\r\n");
}

TEST(Report, JsonCarriesSeedAndSampleCount) {
  ExperimentReport r;
  r.name = "x";
  r.seed = 5;
  r.sample_count = 9;
  r.add("slope", 1.5, 0.1);
  r.columns = {"x"};
  r.rows = {{1.0}};
  const auto j = to_json(r);
  EXPECT_EQ(j["seed"], 5);
  EXPECT_EQ(j["sample_count"], 9);
  EXPECT_EQ(j["estimates"]["slope"]["value"], 1.5);
  EXPECT_EQ(j["table"]["rows"][0][0], 1.0);
}
