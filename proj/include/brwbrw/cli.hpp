#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "brwbrw/error.hpp"
#include "brwbrw/walk.hpp"
#include "json.hpp"

namespace brwbrw::cli {

// Bumped whenever a JSON field or CSV column changes.
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitBudget = 3, kExitInternal = 4 };

int exit_code_for(ErrorCode code);

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct FamilyShorthand {
  int d = 2;
  int k0 = 1;
  double gamma0 = 1.0;
  int k1 = 1;
  double gamma1 = 1.0;
};

// Parsed JSON config. Layer weights come either from "p0"/"p1" or from a
// "family" object {d, k0, gamma0, k1, gamma1}; every other top-level key is
// a parameter read by the subcommand.
class RunConfig {
 public:
  // Accepts a config document or a previously written JSON report, in which
  // case its "config" member is used. Throws ConfigError.
  static RunConfig parse(std::string_view text);

  int dim() const { return dist0_.dim(); }
  const StepDistribution& dist0() const { return dist0_; }
  const StepDistribution& dist1() const { return dist1_; }
  const std::optional<FamilyShorthand>& family() const { return family_; }

  std::uint64_t seed() const { return seed_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  unsigned workers() const { return workers_; }
  void set_workers(unsigned workers) { workers_ = workers; }

  // Parameter lookup with a default. The resolved value is recorded so that
  // echo() reproduces the run.
  template <typename T>
  T get(const std::string& key, T fallback) {
    const auto it = doc_.find(key);
    consumed_.push_back(key);
    if (it == doc_.end()) {
      echo_params_[key] = fallback;
      return fallback;
    }
    try {
      T value = it->template get<T>();
      echo_params_[key] = value;
      return value;
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(line_of(key), "parameter '" + key + "' has the wrong type");
    }
  }
  bool has(const std::string& key) const { return doc_.contains(key); }
  int line_of(std::string_view key) const;
  [[noreturn]] void fail(std::string_view key, const std::string& message) const;

  // Rejects keys no subcommand asked for.
  void finish() const;

  // Fully expanded config: explicit weights, family (if used), seed and every
  // parameter with its resolved value.
  nlohmann::json echo() const;

 private:
  std::string source_;
  nlohmann::json doc_;
  StepDistribution dist0_;
  StepDistribution dist1_;
  std::vector<double> raw_p0_;  // as written in the config
  std::vector<double> raw_p1_;
  std::optional<FamilyShorthand> family_;
  std::uint64_t seed_ = 1;
  unsigned workers_ = 0;
  std::vector<std::string> consumed_;
  nlohmann::json echo_params_ = nlohmann::json::object();
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"backtrack", "tail",         "resistance", "trap",
                                                 "cutpoints", "fluctuations", "velocity"};
  return names;
}

// Entry point of the command-line tool. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace brwbrw::cli
