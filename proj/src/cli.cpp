#include "brwbrw/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "brwbrw/analysis.hpp"
#include "brwbrw/experiments.hpp"
#include "brwbrw/parallel.hpp"
#include "brwbrw/report.hpp"
#include "brwbrw/trace_graph.hpp"

namespace brwbrw::cli {

using nlohmann::json;

namespace {

std::string with_line(int line, const std::string& message) {
  return line > 0 ? "config line " + std::to_string(line) + ": " + message : "config: " + message;
}

int line_at_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::vector<double> number_array(const json& value) {
  if (!value.is_array()) throw std::invalid_argument("expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : value) {
    if (!v.is_number()) throw std::invalid_argument("expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::VertexBudgetExceeded:
    case ErrorCode::CoordinateOutOfRange:
    case ErrorCode::Overflow:
      return kExitBudget;
    case ErrorCode::InvalidArgument:
    case ErrorCode::NegativeWeight:
    case ErrorCode::NotNormalized:
    case ErrorCode::ZeroWeightLayerOne:
    case ErrorCode::NonPositiveFirstDriftLayerZero:
    case ErrorCode::DegenerateGrid:
    case ErrorCode::InsufficientGrid:
    case ErrorCode::TooFewSamples:
    case ErrorCode::NotTransient:
    case ErrorCode::AlphaInfinite:
    case ErrorCode::MalformedDump:
      return kExitConfig;
    default:
      return kExitInternal;
  }
}

ConfigError::ConfigError(int line, const std::string& message) : std::runtime_error(with_line(line, message)), line_(line) {}

int RunConfig::line_of(std::string_view key) const {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = source_.find(quoted);
  return pos == std::string::npos ? 0 : line_at_offset(source_, pos);
}

void RunConfig::fail(std::string_view key, const std::string& message) const {
  throw ConfigError(line_of(key), message);
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig cfg;
  cfg.source_ = std::string(text);
  try {
    cfg.doc_ = json::parse(cfg.source_);
  } catch (const json::parse_error& e) {
    throw ConfigError(line_at_offset(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON");
  }
  if (!cfg.doc_.is_object()) throw ConfigError(1, "top level must be an object");
  if (cfg.doc_.contains("schema_version") && cfg.doc_.contains("config")) {
    json inner = cfg.doc_["config"];
    cfg.doc_ = std::move(inner);
    if (!cfg.doc_.is_object()) cfg.fail("config", "embedded config must be an object");
  }
  cfg.consumed_ = {"d", "p0", "p1", "family", "seed", "workers", "command", "experiment"};

  std::vector<double> p0, p1;
  try {
    if (cfg.doc_.contains("p0")) p0 = number_array(cfg.doc_["p0"]);
  } catch (const std::invalid_argument& e) {
    cfg.fail("p0", std::string("p0: ") + e.what());
  }
  try {
    if (cfg.doc_.contains("p1")) p1 = number_array(cfg.doc_["p1"]);
  } catch (const std::invalid_argument& e) {
    cfg.fail("p1", std::string("p1: ") + e.what());
  }

  if (cfg.doc_.contains("family")) {
    const auto& f = cfg.doc_["family"];
    if (!f.is_object()) cfg.fail("family", "family must be an object {d, k0, gamma0, k1, gamma1}");
    FamilyShorthand fam;
    try {
      fam.d = f.contains("d") ? f["d"].get<int>() : cfg.doc_.value("d", 0);
      fam.k0 = f.at("k0").get<int>();
      fam.gamma0 = f.at("gamma0").get<double>();
      fam.k1 = f.at("k1").get<int>();
      fam.gamma1 = f.at("gamma1").get<double>();
    } catch (const json::exception&) {
      cfg.fail("family", "family needs integer d, k0, k1 and numeric gamma0, gamma1");
    }
    if (fam.d < 1 || fam.d > kMaxDimension) cfg.fail("family", "family d must be in 1.." + std::to_string(kMaxDimension));
    if (fam.k0 < 0 || fam.k0 > fam.d || fam.k1 < 0 || fam.k1 > fam.d) cfg.fail("family", "family k must be in 0..d");
    if (!(fam.gamma0 > 0.0) || !(fam.gamma1 > 0.0)) cfg.fail("family", "family gamma must be positive");
    const auto f0 = family_weights(fam.d, fam.k0, fam.gamma0);
    const auto f1 = family_weights(fam.d, fam.k1, fam.gamma1);
    if ((!p0.empty() && p0 != f0) || (!p1.empty() && p1 != f1)) {
      cfg.fail("family", "explicit p0/p1 disagree with the family shorthand");
    }
    p0 = f0;
    p1 = f1;
    cfg.family_ = fam;
  }
  if (p0.empty()) cfg.fail("p0", "missing layer-0 weights (p0 or family)");
  if (p1.empty()) cfg.fail("p1", "missing layer-1 weights (p1 or family)");
  if (cfg.doc_.contains("d")) {
    const auto& d = cfg.doc_["d"];
    if (!d.is_number_integer() || 2 * d.get<int>() != static_cast<int>(p0.size())) {
      cfg.fail("d", "d does not match the number of weights");
    }
  }
  if (p0.size() != p1.size()) cfg.fail("p1", "p0 and p1 have different lengths");

  try {
    cfg.dist0_ = validate_distribution(p0, Layer::LayerZero);
  } catch (const Error& e) {
    cfg.fail(cfg.family_ ? "family" : "p0", std::string("p0: ") + e.what());
  }
  try {
    cfg.dist1_ = validate_distribution(p1, Layer::LayerOne);
  } catch (const Error& e) {
    cfg.fail(cfg.family_ ? "family" : "p1", std::string("p1: ") + e.what());
  }
  cfg.raw_p0_ = std::move(p0);
  cfg.raw_p1_ = std::move(p1);

  try {
    if (cfg.doc_.contains("seed")) cfg.seed_ = cfg.doc_["seed"].get<std::uint64_t>();
  } catch (const json::exception&) {
    cfg.fail("seed", "seed must be an unsigned 64-bit integer");
  }
  try {
    if (cfg.doc_.contains("workers")) cfg.workers_ = cfg.doc_["workers"].get<unsigned>();
  } catch (const json::exception&) {
    cfg.fail("workers", "workers must be a non-negative integer");
  }
  return cfg;
}

void RunConfig::finish() const {
  for (const auto& item : doc_.items()) {
    if (std::find(consumed_.begin(), consumed_.end(), item.key()) == consumed_.end()) {
      fail(item.key(), "unknown parameter '" + item.key() + "'");
    }
  }
}

json RunConfig::echo() const {
  json e = echo_params_;
  e["d"] = dim();
  e["p0"] = raw_p0_;
  e["p1"] = raw_p1_;
  if (family_) {
    e["family"] = {{"d", family_->d},
                   {"k0", family_->k0},
                   {"gamma0", family_->gamma0},
                   {"k1", family_->k1},
                   {"gamma1", family_->gamma1}};
  }
  e["seed"] = seed_;
  e["workers"] = workers_;
  return e;
}

namespace {

json vector_json(std::span<const double> v) {
  json out = json::array();
  for (const double x : v) out.push_back(json_number(x));
  return out;
}

json profile_json(const analysis::AnalyticProfile& p) {
  json j = {{"ell", vector_json(p.direction.ell)},
            {"log_beta", json_number(p.direction.log_beta)},
            {"beta", json_number(p.beta())},
            {"balanced", p.direction.balanced},
            {"drift0", vector_json(p.drift0)},
            {"drift1", vector_json(p.drift1)},
            {"drift0_dot_ell", json_number(p.drift0_dot_ell)},
            {"transient", p.transient},
            {"regime", std::string(analysis::to_string(p.regime))}};
  if (p.direction.balanced) j["ell_convention"] = "e1 (direction undefined for a balanced layer-1 law)";
  j["alpha"] = p.alpha ? json_number(*p.alpha) : json(nullptr);
  j["t_root"] = p.t_root ? json_number(*p.t_root) : json(nullptr);
  j["kappa"] = p.kappa ? json_number(*p.kappa) : json(nullptr);
  if (p.doob) {
    j["doob_weights"] = vector_json(p.doob->dist.weights());
    j["doob_drift"] = vector_json(p.doob->drift);
  } else {
    j["doob_weights"] = nullptr;
    j["doob_drift"] = nullptr;
  }
  return j;
}

nested::NestedWalkOptions walk_options(RunConfig& cfg) {
  nested::NestedWalkOptions o;
  o.margin = cfg.get<double>("margin", 0.0);
  o.min_extension = cfg.get<std::uint64_t>("min_extension", o.min_extension);
  o.vertex_budget = cfg.get<std::uint64_t>("vertex_budget", o.vertex_budget);
  if (o.min_extension == 0) cfg.fail("min_extension", "min_extension must be positive");
  return o;
}

struct Output {
  std::string name;
  json results;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
};

Output report_output(const ExperimentReport& report) {
  Output out;
  out.name = report.name;
  out.results = to_json(report);
  out.csv_header = report.columns;
  for (const auto& row : report.rows) {
    std::vector<std::string> fields;
    for (const double v : row) fields.push_back(format_number(v));
    out.csv_rows.push_back(std::move(fields));
  }
  return out;
}

// Parameters of other subcommands are tolerated here so one file can serve
// classify and an experiment.
Output cmd_classify(RunConfig& cfg) {
  const auto profile = analysis::classify(cfg.dist0(), cfg.dist1());
  Output out;
  out.name = "classify";
  out.results = profile_json(profile);
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  out.csv_header = {"regime", "transient", "beta", "alpha", "kappa", "drift0_dot_ell"};
  out.csv_rows.push_back({std::string(analysis::to_string(profile.regime)), profile.transient ? "true" : "false",
                          format_number(profile.beta()), opt(profile.alpha), opt(profile.kappa),
                          format_number(profile.drift0_dot_ell)});
  return out;
}

Output cmd_sweep(RunConfig& cfg) {
  if (!cfg.family()) cfg.fail("family", "sweep needs the family shorthand");
  const auto grid = cfg.get<std::vector<double>>("gamma1_grid", {});
  if (grid.empty()) cfg.fail("gamma1_grid", "gamma1_grid must be a nonempty array");
  for (const double g : grid) {
    if (!(g > 0.0)) cfg.fail("gamma1_grid", "gamma1_grid entries must be positive");
  }
  const auto n = cfg.get<std::uint64_t>("n", 100'000);
  const auto replicas = cfg.get<std::uint64_t>("replicas", 16);
  const auto tail_replicas = cfg.get<std::uint64_t>("tail_replicas", 10'000);
  const auto options = walk_options(cfg);
  cfg.finish();
  if (n == 0) cfg.fail("n", "n must be positive");
  if (replicas < 2) cfg.fail("replicas", "replicas must be at least 2");

  const auto fam = *cfg.family();
  Output out;
  out.name = "sweep";
  out.results = json::array();
  out.csv_header = {"gamma1", "regime", "kappa", "skipped", "speed", "speed_stderr", "hill_kappa", "hill_stderr"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto dist1 = validate_distribution(family_weights(fam.d, fam.k1, grid[i]), Layer::LayerOne);
    const auto profile = analysis::classify(cfg.dist0(), dist1);
    const bool skipped =
        profile.regime == analysis::Regime::Boundary || profile.regime == analysis::Regime::Recurrent;
    double speed = std::nan(""), speed_se = std::nan(""), hill = std::nan(""), hill_se = std::nan("");
    if (!skipped) {
      const auto v = nested::estimate_velocity(cfg.dist0(), dist1, n, replicas,
                                               derive_seed(cfg.seed(), "sweep:velocity:" + std::to_string(i)),
                                               cfg.workers(), options);
      speed = v.parallel;
      speed_se = v.parallel_stderr;
      if (tail_replicas > 0) {
        const auto samples = experiments::escape_tail_samples(
            cfg.dist0(), profile.direction.ell, profile.direction.log_beta, 0, tail_replicas,
            derive_seed(cfg.seed(), "sweep:tail:" + std::to_string(i)), cfg.workers());
        const auto h = experiments::hill_tail_index(samples.smoothed());
        hill = h.estimate("kappa").value;
        hill_se = h.estimate("kappa").standard_error;
      }
    }
    const double kappa = profile.kappa ? *profile.kappa : std::nan("");
    out.results.push_back({{"gamma1", grid[i]},
                           {"regime", std::string(analysis::to_string(profile.regime))},
                           {"kappa", json_number(kappa)},
                           {"skipped", skipped},
                           {"speed", json_number(speed)},
                           {"speed_stderr", json_number(speed_se)},
                           {"hill_kappa", json_number(hill)},
                           {"hill_stderr", json_number(hill_se)}});
    out.csv_rows.push_back({format_number(grid[i]), std::string(analysis::to_string(profile.regime)),
                            format_number(kappa), skipped ? "true" : "false", format_number(speed),
                            format_number(speed_se), format_number(hill), format_number(hill_se)});
  }
  return out;
}

std::vector<double> default_x_grid() { return {1, 2, 3, 4, 5, 6, 7, 8}; }

ExperimentReport run_experiment(RunConfig& cfg, const std::string& name) {
  const auto seed = cfg.seed();
  const auto workers = cfg.workers();
  const auto& dist0 = cfg.dist0();
  const auto& dist1 = cfg.dist1();
  const auto dir = analysis::conductance_direction(dist1);

  if (name == "backtrack") {
    const auto n = cfg.get<std::uint64_t>("n", 0);
    const auto replicas = cfg.get<std::uint64_t>("replicas", 10'000);
    const auto grid = cfg.get<std::vector<double>>("x_grid", default_x_grid());
    cfg.finish();
    auto report = experiments::estimate_backtrack_exponent(dist0, dir.ell, n, replicas, grid, seed, workers);
    if (analysis::dot(drift(dist0), dir.ell) > 0.0) {
      report.add("analytic_log_alpha", analysis::solve_alpha(dist0, dir.ell).t_root);
    }
    return report;
  }
  if (name == "tail") {
    const auto n = cfg.get<std::uint64_t>("n", 0);
    const auto replicas = cfg.get<std::uint64_t>("replicas", 100'000);
    const auto k = cfg.get<std::uint64_t>("k", 0);
    const auto smoothing = cfg.get<std::string>("smoothing", "holding");
    cfg.finish();
    if (smoothing != "holding" && smoothing != "none") cfg.fail("smoothing", "smoothing must be 'holding' or 'none'");
    if (!(dir.log_beta > 0.0)) cfg.fail("p1", "the tail experiment needs a biased layer-1 law");
    const auto samples = experiments::escape_tail_samples(dist0, dir.ell, dir.log_beta, n, replicas, seed, workers);
    auto report = experiments::hill_tail_index(smoothing == "holding" ? samples.smoothed() : samples.raw(), k);
    report.name = "tail";
    report.seed = seed;
    report.add("horizon", static_cast<double>(samples.n));
    try {
      const auto raw = experiments::hill_tail_index(samples.raw(), k);
      report.add("kappa_raw", raw.estimate("kappa").value, raw.estimate("kappa").standard_error);
    } catch (const Error&) {
    }
    const auto profile = analysis::classify(dist0, dist1);
    if (profile.kappa) report.add("analytic_kappa", *profile.kappa);
    if (samples.degenerate) report.flags.push_back("degenerate");
    return report;
  }
  if (name == "resistance") {
    const auto n = cfg.get<std::uint64_t>("n", 100'000);
    const auto replicas = cfg.get<std::uint64_t>("replicas", 10);
    cfg.finish();
    return experiments::resistance_growth(dist0, dir.ell, dir.log_beta, n, replicas, seed, workers);
  }
  if (name == "trap") {
    const auto grid = cfg.get<std::vector<double>>("h_grid", {2, 3, 4});
    experiments::TrapGeometry geometry;
    geometry.width = cfg.get<double>("w", geometry.width);
    geometry.max_phase_steps = cfg.get<std::uint64_t>("max_phase_steps", geometry.max_phase_steps);
    const auto replicas = cfg.get<std::uint64_t>("replicas", 100'000);
    cfg.finish();
    const auto profile = analysis::classify(dist0, dist1);
    return experiments::trap_event_frequency(dist0, profile, grid, replicas, seed, geometry, workers);
  }
  if (name == "cutpoints") {
    const auto n = cfg.get<std::uint64_t>("n", 100'000);
    const auto margin = cfg.get<std::uint64_t>("tail_margin", 0);
    const auto dump = cfg.get<std::string>("trace_dump", "");
    cfg.finish();
    if (!dump.empty()) {
      std::ofstream file(dump, std::ios::binary);
      if (!file) cfg.fail("trace_dump", "cannot open '" + dump + "' for writing");
      write_trace(file, TraceGraph::generate(dist0, n, RandomSeed{seed, 0}));
    }
    return experiments::cutpoint_potential_trend(dist0, dist1, n, seed, margin);
  }
  if (name == "fluctuations") {
    const auto grid = cfg.get<std::vector<std::uint64_t>>("n_grid", {10'000, 31'623, 100'000, 316'228});
    const auto replicas = cfg.get<std::uint64_t>("replicas", 100);
    const auto options = walk_options(cfg);
    cfg.finish();
    return experiments::fluctuation_exponent(dist0, dist1, grid, replicas, seed, workers, options);
  }
  if (name == "velocity") {
    const auto n = cfg.get<std::uint64_t>("n", 100'000);
    const auto horizons = cfg.get<std::vector<std::uint64_t>>("horizons", {n});
    const auto replicas = cfg.get<std::uint64_t>("replicas", 32);
    const auto options = walk_options(cfg);
    cfg.finish();
    return experiments::velocity_report(dist0, dist1, horizons, replicas, seed, workers, options);
  }
  throw ConfigError(0, "unknown experiment '" + name + "'");
}

void write_outputs(const Output& result, const RunConfig& cfg, const std::string& command, double seconds,
                   const std::string& out_dir, const std::string& format, std::ostream& out) {
  json config = cfg.echo();
  config["command"] = command;
  if (command == "experiment") config["experiment"] = result.name;
  const json doc = {{"schema_version", kSchemaVersion},
                    {"config", config},
                    {"seed", cfg.seed()},
                    {"results", result.results},
                    {"runtime_seconds", seconds}};

  std::vector<std::string> header = {"schema_version"};
  header.insert(header.end(), result.csv_header.begin(), result.csv_header.end());
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : result.csv_rows) {
    std::vector<std::string> row = {std::to_string(kSchemaVersion)};
    row.insert(row.end(), r.begin(), r.end());
    rows.push_back(std::move(row));
  }

  const bool want_json = format != "csv";
  const bool want_csv = format != "json";
  if (out_dir.empty()) {
    if (want_json) out << doc.dump(2) << '\n';
    if (want_csv && !want_json) write_csv(out, header, rows);
    return;
  }
  std::filesystem::create_directories(out_dir);
  const auto base = std::filesystem::path(out_dir) / result.name;
  if (want_json) {
    std::ofstream f(base.string() + ".json");
    f << doc.dump(2) << '\n';
    if (!f) throw std::runtime_error("cannot write " + base.string() + ".json");
    out << base.string() << ".json\n";
  }
  if (want_csv) {
    std::ofstream f(base.string() + ".csv", std::ios::binary);
    write_csv(f, header, rows);
    if (!f) throw std::runtime_error("cannot write " + base.string() + ".csv");
    out << base.string() << ".csv\n";
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Biased random walk on the trace of a biased random walk: classification, sweeps and experiments"};
  app.fallthrough();
  app.require_subcommand(1);
  std::string config_path, out_dir, format = "both", experiment;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  app.add_option("--config", config_path, "JSON config or a previous JSON report")->required();
  app.add_option("--seed", seed, "Top-level seed (overrides the config)");
  app.add_option("--out", out_dir, "Output directory; stdout when absent");
  app.add_option("--workers", workers, "Worker threads (default: available parallelism)");
  app.add_option("--format", format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
  auto* classify = app.add_subcommand("classify", "Analytic profile of a parameter set");
  auto* sweep = app.add_subcommand("sweep", "Phase table over gamma1_grid");
  auto* exp = app.add_subcommand("experiment", "Run one Monte Carlo experiment");
  exp->add_option("name", experiment, "backtrack | tail | resistance | trap | cutpoints | fluctuations | velocity")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (exp->parsed() &&
        std::find(experiment_names().begin(), experiment_names().end(), experiment) == experiment_names().end()) {
      throw ConfigError(0, "unknown experiment '" + experiment + "'");
    }
    std::ifstream file(config_path);
    if (!file) throw ConfigError(0, "cannot read '" + config_path + "'");
    std::stringstream text;
    text << file.rdbuf();
    auto cfg = RunConfig::parse(text.str());
    if (seed) cfg.set_seed(*seed);
    if (workers) cfg.set_workers(*workers);
    if (cfg.workers() == 0) cfg.set_workers(default_workers());

    const auto start = std::chrono::steady_clock::now();
    Output result;
    std::string command;
    if (classify->parsed()) {
      command = "classify";
      result = cmd_classify(cfg);
    } else if (sweep->parsed()) {
      command = "sweep";
      result = cmd_sweep(cfg);
    } else {
      command = "experiment";
      auto report = run_experiment(cfg, experiment);
      report.config = cfg.echo();
      result = report_output(report);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_outputs(result, cfg, command, seconds, out_dir, format, out);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace brwbrw::cli
