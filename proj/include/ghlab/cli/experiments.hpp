#pragma once

#include "ghlab/cli/output.hpp"

#include <functional>
#include <map>
#include <string>

namespace ghlab::cli {

using Experiment = std::function<RunResult(const ExperimentConfig&)>;

/// Every experiment by subcommand name.
const std::map<std::string, Experiment>& experiments();

/// Runs one experiment; rows come back sorted by descriptor.
RunResult run_experiment(const std::string& name, const ExperimentConfig& config);

/// GHLAB_THREADS when set (>= 1), else the hardware concurrency.
int thread_count();

/// fn(0..count-1) on a fixed-size pool; results land at their own index.
void parallel_for(int count, const std::function<void(int)>& fn);

/// Deterministic per-row seed derived from the config seed.
std::uint64_t row_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

}  // namespace ghlab::cli
