#pragma once

#include "ghlab/kernels/kernel.hpp"
#include "ghlab/locus/locus.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace ghlab::cli {

inline constexpr int kSchemaVersion = 1;

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  std::string experiment;          // optional in the file; must match the subcommand when present
  std::optional<int> N;            // experiment default when absent
  std::optional<Mat> A;            // explicit entries
  double lambda = 0.5, Lambda = 2.0;   // spectral recipe when A is absent
  std::uint64_t matrix_seed = 7;
  std::optional<double> C0, C_hat, C_prime;
  std::optional<std::vector<double>> C_s;
  kernels::QuadratureSpec quad;
  std::uint64_t seed = 1;
  int points = 0;                  // 0: experiment default
  std::string out_dir = ".";
  nlohmann::json params = nlohmann::json::object();

  int n_or(int fallback) const { return N.value_or(fallback); }
  int points_or(int fallback) const { return points > 0 ? points : fallback; }
  /// Explicit A, or a random SPD matrix with spectrum in [lambda, Lambda].
  QuadForm form(int n) const;
  locus::RegionConstants constants(const QuadForm& a) const;
  double param(const std::string& key, double fallback) const;

  /// Canonical JSON (sorted keys, every field present) and its FNV-1a hash.
  nlohmann::json to_json() const;
  std::uint64_t hash() const;
  std::string hash_hex() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

}  // namespace ghlab::cli
