#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ghlab/cli/experiments.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace ghlab;
using namespace ghlab::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("ghlab_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string drop_first_line(const std::string& s) { return s.substr(s.find('\n') + 1); }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

ExperimentConfig small(const std::string& experiment, int points) {
  ExperimentConfig c = parse_config({{"schema_version", 1}, {"experiment", experiment}, {"points", points}});
  return c;
}

int run_bin(const std::string& args) {
  const char* bin = std::getenv("GHLAB_BIN");
  REQUIRE_MESSAGE(bin, "GHLAB_BIN not set");
  const int st = std::system((std::string(bin) + " " + args + " > /dev/null 2>&1").c_str());
  REQUIRE(WIFEXITED(st));
  return WEXITSTATUS(st);
}

fs::path write_json(const fs::path& dir, const std::string& name, const json& j) {
  const fs::path p = dir / name;
  std::ofstream(p) << j.dump();
  return p;
}

}  // namespace

TEST_CASE("config: defaults and explicit fields") {
  const auto c = parse_config({{"schema_version", 1}});
  CHECK(c.experiment.empty());
  CHECK_FALSE(c.N.has_value());
  CHECK(c.seed == 1);
  CHECK(c.points_or(42) == 42);

  const auto d = parse_config({{"schema_version", 1},
                               {"N", 2},
                               {"A", {{2, 0.5}, {0.5, 1}}},
                               {"constants", {{"C0", 5}}},
                               {"quadrature", {{"method", "qmc"}, {"rel_tol", 1e-6}}},
                               {"seed", 9},
                               {"points", 3},
                               {"params", {{"tol", 0.25}}}});
  CHECK(*d.N == 2);
  CHECK(d.form(2).matrix()(0, 1) == 0.5);
  CHECK_THROWS_AS(d.form(3), ConfigError);
  CHECK(d.quad.method == kernels::Method::quasi_monte_carlo);
  CHECK(d.quad.rel_tol == 1e-6);
  CHECK(d.seed == 9);
  CHECK(d.points_or(42) == 3);
  CHECK(d.param("tol", 1) == 0.25);
  CHECK(d.param("absent", 7) == 7);
}

TEST_CASE("config: rejected inputs") {
  CHECK_THROWS_AS(parse_config(json::object()), ConfigError);
  CHECK_THROWS_AS(parse_config({{"schema_version", 2}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"schema_version", 1}, {"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"schema_version", 1}, {"N", 0}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"schema_version", 1}, {"N", 9}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"schema_version", 1}, {"A", {{1, 0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"schema_version", 1}, {"spectrum", {{"lambda", 3}, {"Lambda", 1}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"schema_version", 1}, {"quadrature", {{"method", "simpson"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"schema_version", 1}, {"points", -1}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"schema_version", "one"}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"schema_version", 1}, {"params", {{"tol", "x"}}}}).param("tol", 1), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/ghlab.json"), ConfigError);
}

TEST_CASE("config hash: canonical, sensitive to content, stable under key order") {
  const auto a = parse_config(json::parse(R"({"schema_version":1,"seed":3,"points":5})"));
  const auto b = parse_config(json::parse(R"({"points":5,"seed":3,"schema_version":1})"));
  const auto c = parse_config(json::parse(R"({"schema_version":1,"seed":4,"points":5})"));
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != c.hash());
  CHECK(a.hash_hex().size() == 16);
  // round trip through the canonical form keeps the hash
  json canon = a.to_json();
  for (const char* k : {"N", "A"})
    if (canon[k].is_null()) canon.erase(k);
  for (auto it = canon["constants"].begin(); it != canon["constants"].end();)
    it = it->is_null() ? canon["constants"].erase(it) : std::next(it);
  CHECK(parse_config(canon).hash() == a.hash());
}

TEST_CASE("registry: every experiment, unknown names, name mismatch") {
  const std::set<std::string> want = {"flat-cy",    "taubnut-exact", "kernel-closedform", "commutativity",
                                      "harmonicity", "weak-chern",   "pythagoras",        "eigen-interval",
                                      "decay-scan", "beta-bounds",   "gamma-sum",         "logz-growth",
                                      "glue-regions", "extension-profile"};
  std::set<std::string> have;
  for (const auto& [k, v] : experiments()) have.insert(k);
  CHECK(have == want);
  CHECK_THROWS_AS(run_experiment("no-such", small("", 1)), ConfigError);
  CHECK_THROWS_AS(run_experiment("pythagoras", small("flat-cy", 1)), ConfigError);
}

TEST_CASE("rows come back sorted and deterministic for a seed") {
  auto c = small("pythagoras", 20);
  const auto r1 = run_experiment("pythagoras", c);
  const auto r2 = run_experiment("pythagoras", c);
  REQUIRE(r1.rows.size() == 20);
  CHECK(r1.all_pass());
  for (std::size_t i = 1; i < r1.rows.size(); ++i) CHECK(r1.rows[i - 1].descriptor < r1.rows[i].descriptor);
  for (std::size_t i = 0; i < r1.rows.size(); ++i) {
    CHECK(r1.rows[i].descriptor == r2.rows[i].descriptor);
    CHECK(r1.rows[i].values == r2.rows[i].values);
  }
  c.seed = 2;
  const auto r3 = run_experiment("pythagoras", c);
  bool differs = false;
  for (std::size_t i = 0; i < r1.rows.size(); ++i) differs |= r1.rows[i].values != r3.rows[i].values;
  CHECK(differs);
}

TEST_CASE("row seeds are distinct across streams and indices") {
  std::set<std::uint64_t> s;
  for (std::uint64_t stream = 0; stream < 4; ++stream)
    for (std::uint64_t i = 0; i < 100; ++i) s.insert(row_seed(1, stream, i));
  CHECK(s.size() == 400);
  CHECK(row_seed(1, 0, 0) != row_seed(2, 0, 0));
}

TEST_CASE("parallel_for fills every index once") {
  std::vector<int> hits(257, 0);
  parallel_for(257, [&](int i) { hits[i] += 1; });
  for (int h : hits) REQUIRE(h == 1);
}

TEST_CASE("outputs: CSV header, config hash on every row, JSON summary") {
  const fs::path dir = scratch("out");
  const auto c = small("eigen-interval", 6);
  const auto r = run_experiment("eigen-interval", c);
  const std::string csv = write_outputs(r, c, dir.string());
  CHECK(fs::path(csv) == dir / "eigen-interval.csv");
  const auto ls = lines(slurp(csv));
  REQUIRE(ls.size() == 2 + 6);
  CHECK(ls[0].rfind("# generated ", 0) == 0);
  CHECK(ls[1] == "experiment,config_hash,descriptor,lambda_min,lambda_max,lower_bound,min_eig,max_eig,tolerance,pass,note");
  for (std::size_t i = 2; i < ls.size(); ++i) CHECK(ls[i].rfind("eigen-interval," + c.hash_hex() + ",", 0) == 0);
  const json j = json::parse(slurp(dir / "eigen-interval.json"));
  CHECK(j["config_hash"] == c.hash_hex());
  CHECK(j["rows"] == 6);
  CHECK(j["all_pass"] == true);
  CHECK(j["config"] == c.to_json());
  fs::remove_all(dir);
}

TEST_CASE("format_number") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(NAN) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(std::stod(format_number(1.0 / 3)) == 1.0 / 3);
}

TEST_CASE("binary: exit codes, list, byte-identical reruns, thread-count independence") {
  const fs::path dir = scratch("bin");
  const fs::path ok = write_json(dir, "ok.json", {{"schema_version", 1}, {"points", 30}});
  const fs::path bad = write_json(dir, "bad.json", {{"schema_version", 7}});
  const fs::path strict = write_json(dir, "strict.json", {{"schema_version", 1}, {"points", 5}, {"params", {{"tol", -1}}}});

  CHECK(run_bin("list") == 0);
  CHECK(run_bin("pythagoras --config " + ok.string() + " --out " + (dir / "a").string()) == 0);
  CHECK(run_bin("pythagoras --config " + bad.string() + " --out " + (dir / "x").string()) == 2);
  CHECK(run_bin("pythagoras --config " + strict.string() + " --out " + (dir / "x").string()) == 1);
  CHECK(run_bin("pythagoras --config " + (dir / "missing.json").string()) != 0);
  CHECK(run_bin("no-such-experiment") != 0);

  const std::string a = drop_first_line(slurp(dir / "a" / "pythagoras.csv"));
  CHECK(run_bin("pythagoras --config " + ok.string() + " --out " + (dir / "b").string()) == 0);
  CHECK(a == drop_first_line(slurp(dir / "b" / "pythagoras.csv")));
  CHECK(run_bin("pythagoras --config " + ok.string() + " --out " + (dir / "c").string() + " --seed 5") == 0);
  CHECK(a != drop_first_line(slurp(dir / "c" / "pythagoras.csv")));

  for (const char* threads : {"1", "3"}) {
    const fs::path out = dir / (std::string("t") + threads);
    const std::string cmd = std::string("GHLAB_THREADS=") + threads + " " + std::getenv("GHLAB_BIN") +
                            " pythagoras --config " + ok.string() + " --out " + out.string() + " > /dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(a == drop_first_line(slurp(out / "pythagoras.csv")));
  }
  fs::remove_all(dir);
}

TEST_CASE("shipped configs parse and name their experiment") {
  const char* dir = std::getenv("GHLAB_CONFIGS");
  REQUIRE_MESSAGE(dir, "GHLAB_CONFIGS not set");
  int seen = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".json") continue;
    const auto c = load_config(e.path().string());
    CHECK(c.experiment == e.path().stem().string());
    CHECK(experiments().count(c.experiment) == 1);
    ++seen;
  }
  CHECK(seen == static_cast<int>(experiments().size()));
}
