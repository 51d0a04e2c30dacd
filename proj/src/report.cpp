#include "brwbrw/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "brwbrw/error.hpp"

namespace brwbrw {

void ExperimentReport::add(std::string estimate_name, double value, double standard_error) {
  estimates.push_back({std::move(estimate_name), value, standard_error});
}

const Estimate& ExperimentReport::estimate(std::string_view estimate_name) const {
  for (const auto& e : estimates) {
    if (e.name == estimate_name) return e;
  }
  throw Error(ErrorCode::InvalidArgument, "report '" + name + "' has no estimate '" + std::string(estimate_name) + "'");
}

bool ExperimentReport::has_estimate(std::string_view estimate_name) const {
  return std::any_of(estimates.begin(), estimates.end(), [&](const Estimate& e) { return e.name == estimate_name; });
}

bool ExperimentReport::has_flag(std::string_view flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

std::vector<double> ExperimentReport::column(std::string_view column_name) const {
  const auto it = std::find(columns.begin(), columns.end(), column_name);
  if (it == columns.end()) {
    throw Error(ErrorCode::InvalidArgument, "report '" + name + "' has no column '" + std::string(column_name) + "'");
  }
  const auto j = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[j]);
  return out;
}

nlohmann::json json_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

double number_from_json(const nlohmann::json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const auto s = value.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorCode::InvalidArgument, "not a number: " + value.dump());
}

nlohmann::json to_json(const ExperimentReport& report) {
  nlohmann::json estimates = nlohmann::json::object();
  for (const auto& e : report.estimates) {
    estimates[e.name] = {{"value", json_number(e.value)}, {"stderr", json_number(e.standard_error)}};
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const double v : row) r.push_back(json_number(v));
    rows.push_back(std::move(r));
  }
  return {{"name", report.name},
          {"seed", report.seed},
          {"sample_count", report.sample_count},
          {"estimates", estimates},
          {"flags", report.flags},
          {"table", {{"columns", report.columns}, {"rows", rows}}}};
}

std::string csv_field(std::string_view raw) {
  if (raw.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(raw);
  std::string out = "\"";
  for (const char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << csv_field(fields[i]);
    }
    out << "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
}

void write_csv(std::ostream& out, const ExperimentReport& report) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(report.rows.size());
  for (const auto& row : report.rows) {
    std::vector<std::string> fields;
    for (const double v : row) fields.push_back(format_number(v));
    rows.push_back(std::move(fields));
  }
  write_csv(out, report.columns, rows);
}

}  // namespace brwbrw
