#include "ghlab/cli/config.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace ghlab::cli {

using nlohmann::json;

QuadForm ExperimentConfig::form(int n) const {
  if (A) {
    if (A->rows() != n) throw ConfigError("config: A has dimension " + std::to_string(A->rows()) + ", experiment needs " + std::to_string(n));
    return QuadForm(*A);
  }
  std::mt19937_64 rng(matrix_seed);
  return QuadForm(random_spd(n, lambda, Lambda, rng));
}

locus::RegionConstants ExperimentConfig::constants(const QuadForm& a) const {
  auto c = locus::RegionConstants::defaults(a);
  if (C0) {
    c.C0 = *C0;
    c.C_prime = 4 * c.C0 * c.C0;
  }
  if (C_hat) c.C_hat = *C_hat;
  if (C_prime) c.C_prime = *C_prime;
  if (C_s) c.C_s = *C_s;
  c.validate();
  return c;
}

double ExperimentConfig::param(const std::string& key, double fallback) const {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_number()) throw ConfigError("config: params." + key + " must be a number");
  return params[key].get<double>();
}

namespace {

template <class T>
std::optional<T> opt_get(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError("config: " + where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  try {
    only_keys(j, {"schema_version", "experiment", "N", "A", "spectrum", "constants", "quadrature", "seed", "points",
                  "out", "params"},
              "top level");
    if (!j.contains("schema_version")) throw ConfigError("config: schema_version is required");
    c.schema_version = j["schema_version"].get<int>();
    if (c.schema_version != kSchemaVersion)
      throw ConfigError("config: unsupported schema_version " + std::to_string(c.schema_version));
    c.experiment = j.value("experiment", std::string());
    c.N = opt_get<int>(j, "N");
    if (c.N && (*c.N < 1 || *c.N > 8)) throw ConfigError("config: N must lie in 1..8");
    if (j.contains("A") && !j["A"].is_null()) {
      const auto rows = j["A"].get<std::vector<std::vector<double>>>();
      Mat a(rows.size(), rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows.size()) throw ConfigError("config: A must be square");
        for (std::size_t s = 0; s < rows.size(); ++s) a(r, s) = rows[r][s];
      }
      QuadForm check(a);   // throws if not SPD
      c.A = a;
    }
    if (j.contains("spectrum")) {
      const auto& s = j["spectrum"];
      only_keys(s, {"lambda", "Lambda", "seed"}, "spectrum");
      c.lambda = s.value("lambda", c.lambda);
      c.Lambda = s.value("Lambda", c.Lambda);
      c.matrix_seed = s.value("seed", c.matrix_seed);
      if (!(c.lambda > 0) || !(c.Lambda >= c.lambda)) throw ConfigError("config: need 0 < lambda <= Lambda");
    }
    if (j.contains("constants")) {
      const auto& s = j["constants"];
      only_keys(s, {"C0", "C_hat", "C_prime", "C_s"}, "constants");
      c.C0 = opt_get<double>(s, "C0");
      c.C_hat = opt_get<double>(s, "C_hat");
      c.C_prime = opt_get<double>(s, "C_prime");
      c.C_s = opt_get<std::vector<double>>(s, "C_s");
    }
    if (j.contains("quadrature")) {
      const auto& s = j["quadrature"];
      only_keys(s, {"rel_tol", "abs_tol", "max_evals", "method", "qmc_log2_points", "qmc_replicates", "qmc_seed"},
                "quadrature");
      c.quad.rel_tol = s.value("rel_tol", c.quad.rel_tol);
      c.quad.abs_tol = s.value("abs_tol", c.quad.abs_tol);
      c.quad.max_evals = s.value("max_evals", c.quad.max_evals);
      const std::string m = s.value("method", std::string("adaptive"));
      if (m == "adaptive") c.quad.method = kernels::Method::adaptive_nested;
      else if (m == "qmc") c.quad.method = kernels::Method::quasi_monte_carlo;
      else throw ConfigError("config: quadrature.method must be 'adaptive' or 'qmc'");
      c.quad.qmc_log2_points = s.value("qmc_log2_points", c.quad.qmc_log2_points);
      c.quad.qmc_replicates = s.value("qmc_replicates", c.quad.qmc_replicates);
      c.quad.qmc_seed = s.value("qmc_seed", c.quad.qmc_seed);
      c.quad.validate();
    }
    c.seed = j.value("seed", c.seed);
    c.points = j.value("points", 0);
    if (c.points < 0) throw ConfigError("config: points must be >= 0");
    c.out_dir = j.value("out", c.out_dir);
    if (j.contains("params")) {
      if (!j["params"].is_object()) throw ConfigError("config: params must be an object");
      c.params = j["params"];
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return parse_config(j);
}

json ExperimentConfig::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["experiment"] = experiment;
  j["N"] = N ? json(*N) : json(nullptr);
  if (A) {
    std::vector<std::vector<double>> rows(A->rows(), std::vector<double>(A->cols()));
    for (int r = 0; r < A->rows(); ++r)
      for (int s = 0; s < A->cols(); ++s) rows[r][s] = (*A)(r, s);
    j["A"] = rows;
  } else {
    j["A"] = nullptr;
  }
  j["spectrum"] = {{"lambda", lambda}, {"Lambda", Lambda}, {"seed", matrix_seed}};
  j["constants"] = {{"C0", C0 ? json(*C0) : json(nullptr)},
                    {"C_hat", C_hat ? json(*C_hat) : json(nullptr)},
                    {"C_prime", C_prime ? json(*C_prime) : json(nullptr)},
                    {"C_s", C_s ? json(*C_s) : json(nullptr)}};
  j["quadrature"] = {{"rel_tol", quad.rel_tol},
                     {"abs_tol", quad.abs_tol},
                     {"max_evals", quad.max_evals},
                     {"method", quad.method == kernels::Method::adaptive_nested ? "adaptive" : "qmc"},
                     {"qmc_log2_points", quad.qmc_log2_points},
                     {"qmc_replicates", quad.qmc_replicates},
                     {"qmc_seed", quad.qmc_seed}};
  j["seed"] = seed;
  j["points"] = points;
  j["params"] = params;
  return j;   // nlohmann::json objects keep keys sorted
}

std::uint64_t ExperimentConfig::hash() const {
  const std::string s = to_json().dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string ExperimentConfig::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

}  // namespace ghlab::cli
