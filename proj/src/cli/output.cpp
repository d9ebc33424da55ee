#include "ghlab/cli/output.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

namespace ghlab::cli {

bool RunResult::all_pass() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.pass; });
}

void RunResult::sort_rows() {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ResultRow& a, const ResultRow& b) { return a.descriptor < b.descriptor; });
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string write_outputs(const RunResult& r, const ExperimentConfig& c, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto base = std::filesystem::path(dir) / r.experiment;
  const std::string hash = c.hash_hex();
  {
    std::ofstream out(base.string() + ".csv");
    if (!out) throw std::runtime_error("cannot write " + base.string() + ".csv");
    out << "# generated " << timestamp() << "\n";
    out << "experiment,config_hash,descriptor";
    for (const auto& col : r.columns) out << ',' << csv_field(col);
    out << ",tolerance,pass,note\n";
    for (const auto& row : r.rows) {
      out << csv_field(r.experiment) << ',' << hash << ',' << csv_field(row.descriptor);
      for (double v : row.values) out << ',' << format_number(v);
      out << ',' << format_number(row.tolerance) << ',' << (row.pass ? "true" : "false") << ','
          << csv_field(row.note) << '\n';
    }
  }
  {
    nlohmann::json j;
    j["experiment"] = r.experiment;
    j["config_hash"] = hash;
    j["config"] = c.to_json();
    j["columns"] = r.columns;
    j["rows"] = r.rows.size();
    j["failed"] = std::count_if(r.rows.begin(), r.rows.end(), [](const ResultRow& x) { return !x.pass; });
    j["all_pass"] = r.all_pass();
    j["summary"] = r.summary;
    std::ofstream out(base.string() + ".json");
    if (!out) throw std::runtime_error("cannot write " + base.string() + ".json");
    out << j.dump(2) << '\n';
  }
  return base.string() + ".csv";
}

}  // namespace ghlab::cli
