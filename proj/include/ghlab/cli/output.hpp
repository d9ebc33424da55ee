#pragma once

#include "ghlab/cli/config.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ghlab::cli {

struct ResultRow {
  std::string descriptor;   // canonical sort key, e.g. "n1/pt0007"
  std::vector<double> values;   // one per value column
  double tolerance = 0;
  bool pass = false;
  std::string note;
};

struct RunResult {
  std::string experiment;
  std::vector<std::string> columns;   // value column names
  std::vector<ResultRow> rows;
  nlohmann::json summary = nlohmann::json::object();

  bool all_pass() const;
  void sort_rows();
};

/// Writes <dir>/<experiment>.csv and <dir>/<experiment>.json. The CSV starts
/// with one "# generated ..." line; everything after it depends only on the
/// config. Returns the CSV path.
std::string write_outputs(const RunResult& r, const ExperimentConfig& c, const std::string& dir);

/// %.17g, or nan / inf spelled out.
std::string format_number(double x);

}  // namespace ghlab::cli
