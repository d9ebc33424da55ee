#include "ghlab/cli/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitError = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace ghlab::cli;
  CLI::App app{"ghlab: experiment driver for generalized Gibbons-Hawking constructions"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int n = 0;
  struct Sub {
    std::string name;
    CLI::App* app;
  };
  std::vector<Sub> subs;
  for (const auto& [name, fn] : experiments()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--seed", seed, "RNG seed (overrides the config)");
    sub->add_option("--n", n, "N (overrides the config)")->check(CLI::Range(1, 8));
    subs.push_back({name, sub});
  }
  auto* list = app.add_subcommand("list", "print the experiment names");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& s : subs) std::cout << s.name << "\n";
    return 0;
  }
  for (const auto& s : subs) {
    if (!s.app->parsed()) continue;
    ExperimentConfig c;
    try {
      c = load_config(config_path);
      if (!s.app->get_option("--seed")->empty()) c.seed = seed;
      if (!s.app->get_option("--n")->empty()) c.N = n;
      if (!out_dir.empty()) c.out_dir = out_dir;
      if (c.experiment.empty()) c.experiment = s.name;
      const RunResult r = run_experiment(s.name, c);
      const std::string csv = write_outputs(r, c, c.out_dir);
      int passed = 0;
      for (const auto& row : r.rows) passed += row.pass;
      std::printf("%s: %d/%zu rows pass -> %s\n", s.name.c_str(), passed, r.rows.size(), csv.c_str());
      return r.all_pass() ? 0 : kExitFail;
    } catch (const ConfigError& e) {
      std::fprintf(stderr, "ghlab: %s\n", e.what());
      return kExitConfig;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "ghlab: %s\n", e.what());
      return kExitError;
    }
  }
  return kExitError;
}
