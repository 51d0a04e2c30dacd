#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace brwbrw {

struct Estimate {
  std::string name;
  double value = 0.0;
  double standard_error = std::numeric_limits<double>::quiet_NaN();
};

// Output of every Monte Carlo routine: named point estimates, flags for
// degenerate or exploratory results, and a per-abscissa table.
struct ExperimentReport {
  std::string name;
  std::uint64_t seed = 0;
  std::uint64_t sample_count = 0;
  nlohmann::json config = nlohmann::json::object();
  std::vector<Estimate> estimates;
  std::vector<std::string> flags;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::string estimate_name, double value,
           double standard_error = std::numeric_limits<double>::quiet_NaN());
  const Estimate& estimate(std::string_view estimate_name) const;
  bool has_estimate(std::string_view estimate_name) const;
  bool has_flag(std::string_view flag) const;
  // Column of the table by name.
  std::vector<double> column(std::string_view column_name) const;
};

// Non-finite doubles become the strings "inf", "-inf" and "nan"; JSON has no
// literal for them.
nlohmann::json json_number(double value);
double number_from_json(const nlohmann::json& value);

nlohmann::json to_json(const ExperimentReport& report);

// RFC 4180: comma separated, CRLF line ends, quoted when needed, header row first.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
void write_csv(std::ostream& out, const ExperimentReport& report);
std::string csv_field(std::string_view raw);
std::string format_number(double value);

}  // namespace brwbrw
