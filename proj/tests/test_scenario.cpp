#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "benchcost/cli.hpp"
#include "benchcost/scenario.hpp"

using namespace benchcost;

namespace {

const char* kScenario = R"({
  "id": "demo",
  "dist": {"type": "degenerate", "at": 0},
  "cost": {"k": 8, "variable": {"type": "quadratic", "a": 1}},
  "benchmarks": ["mean", {"kind": "trimmed", "tau": 0.25}],
  "targets": [1.0],
  "oracle": {"n_atoms": 500, "threads": 2},
  "tau_grid": [0.0, 0.1, 0.2]
})";

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path("/tmp/benchcost_test_" + name) {
    std::ofstream(path) << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

int run(std::vector<std::string> args) {
  std::vector<const char*> argv = {"benchcost"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("scenario parsing") {
  const Scenario sc = parse_scenario(kScenario);
  CHECK(sc.id == "demo");
  REQUIRE(sc.dist.has_value());
  REQUIRE(sc.cost.has_value());
  CHECK(sc.cost->fixed() == 8.0);
  REQUIRE(sc.benchmarks.size() == 2);
  CHECK(sc.benchmarks[1].kind == BenchmarkKind::TrimmedMean);
  CHECK(sc.benchmarks[1].tau == 0.25);
  CHECK(sc.search.n_atoms == 500);
  CHECK(sc.search.threads == 2);
  CHECK(sc.tau_grid.size() == 3);
}

TEST_CASE("scenario errors name the problem") {
  CHECK_THROWS_AS(parse_scenario("not json"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario(R"({"targets": [1]})"), ScenarioError);
  CHECK_THROWS_AS(
      parse_scenario(R"({"dist": {"type": "nope"}})"), ScenarioError);
  CHECK_THROWS_AS(
      parse_scenario(
          R"({"dist": {"type": "uniform", "lo": 0, "hi": 1},
              "cost": {"k": 1, "variable": {"type": "banana"}}})"),
      ScenarioError);
  CHECK_THROWS_AS(
      parse_scenario(
          R"({"dist": {"type": "uniform", "lo": 0, "hi": 1},
              "benchmarks": [{"tau": 0.2}]})"),
      ScenarioError);
}

TEST_CASE("population scenarios") {
  const Scenario sc = parse_scenario(R"({
    "population": {"subpops": [
      {"mu": 0.5, "dist": {"type": "uniform", "lo": -1, "hi": 1},
       "cost": {"k": 0, "variable": {"type": "quadratic", "a": 1}}},
      {"mu": 0.5, "dist": {"type": "uniform", "lo": -1, "hi": 1},
       "cost": {"k": 0, "variable": {"type": "quadratic", "a": 2}}}
    ]},
    "targets": [1]
  })");
  REQUIRE(sc.population.has_value());
  CHECK(sc.population->size() == 2);
}

TEST_CASE("csv round trip and stable formatting") {
  Table t;
  t.meta = "attack demo";
  t.header = {"benchmark", "cost"};
  t.rows = {{"mean", format_number(4.0 * std::sqrt(2.0))},
            {"trimmed(0.25)", format_number(6.0)}};
  std::ostringstream a, b;
  write_csv(t, a);
  write_csv(t, b);
  CHECK(a.str() == b.str());  // byte-identical on identical input

  std::istringstream in(a.str());
  const Table back = read_csv(in);
  CHECK(back.meta == t.meta);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);

  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e300) == "1e+300");
  CHECK(format_number(kInfinitePrice) == "inf");
}

TEST_CASE("cli evaluate") {
  const TempFile f("eval.json", kScenario);
  const TempFile out("eval.csv", "");
  CHECK(run({"evaluate", f.path, "--out", out.path}) == 0);
  const Table t = read_csv_file(out.path);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.header == std::vector<std::string>{"benchmark", "value"});
  CHECK(std::stod(t.rows[0][1]) == doctest::Approx(0.0));
}

TEST_CASE("cli attack csv schema and idempotence") {
  const TempFile f("attack.json", kScenario);
  const TempFile out("attack.csv", "");
  REQUIRE(run({"attack", f.path, "--out", out.path}) == 0);
  std::ifstream first(out.path);
  std::stringstream s1;
  s1 << first.rdbuf();
  REQUIRE(run({"attack", f.path, "--out", out.path}) == 0);
  std::ifstream second(out.path);
  std::stringstream s2;
  s2 << second.rdbuf();
  CHECK(s1.str() == s2.str());

  const Table t = read_csv_file(out.path);
  CHECK(t.header ==
        std::vector<std::string>{"benchmark", "tau", "P", "delta", "Delta_mass",
                                 "cost", "achieved", "symmetric_final"});
  CHECK(std::stod(t.rows[0][5]) ==
        doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-9));

  // compare reads the tool's own output.
  const TempFile ranked("ranked.csv", "");
  CHECK(run({"compare", out.path, "--out", ranked.path}) == 0);
  const Table r = read_csv_file(ranked.path);
  CHECK(r.header == std::vector<std::string>{"P", "rank", "benchmark", "cost"});
  CHECK(r.rows.size() == t.rows.size());
}

TEST_CASE("cli sweep-tau decreasing costs for the low-fixed-cost model") {
  const TempFile f("sweep.json", R"({
    "dist": {"type": "degenerate", "at": 0},
    "cost": {"k": 2, "variable": {"type": "quadratic", "a": 1}},
    "targets": [1.0],
    "tau_grid": [0.0, 0.1, 0.2, 0.3, 0.4]
  })");
  const TempFile out("sweep.csv", "");
  REQUIRE(run({"sweep-tau", f.path, "--out", out.path}) == 0);
  const Table t = read_csv_file(out.path);
  REQUIRE(t.rows.size() == 5);
  for (size_t i = 1; i < t.rows.size(); ++i)
    CHECK(std::stod(t.rows[i][4]) < std::stod(t.rows[i - 1][4]));
}

TEST_CASE("cli verify exit codes and report") {
  const TempFile f("verify.json", R"({
    "id": "p4",
    "dist": {"type": "degenerate", "at": 0},
    "cost": {"k": 8, "variable": {"type": "quadratic", "a": 1}},
    "targets": [1.0],
    "props": ["P4"]
  })");
  const TempFile out("verify.csv", "");
  CHECK(run({"verify", f.path, "--out", out.path}) == 0);
  const Table t = read_csv_file(out.path);
  CHECK(t.header ==
        std::vector<std::string>{"prop_id", "scenario_id", "closed_form_cost",
                                 "oracle_cost", "abs_gap", "symmetry_pass",
                                 "status"});
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].back() == "pass");
  CHECK(std::stod(t.rows[0][2]) == doctest::Approx(6.0).epsilon(1e-9));

  // Unmet hypotheses exit 3.
  const TempFile g("verify3.json", R"({
    "dist": {"type": "degenerate", "at": 0},
    "cost": {"k": 2, "variable": {"type": "quadratic", "a": 1}},
    "targets": [1.0],
    "props": ["P4"]
  })");
  CHECK(run({"verify", g.path, "--out", out.path}) == 3);
}

TEST_CASE("cli config errors exit 2") {
  CHECK(run({"evaluate", "/nonexistent.json"}) == 2);
  const TempFile f("bad.json", "{");
  CHECK(run({"evaluate", f.path}) == 2);
  CHECK(run({"no-such-command"}) == 2);
  const TempFile g("nobench.json",
                   R"({"dist": {"type": "uniform", "lo": -1, "hi": 1}})");
  CHECK(run({"evaluate", g.path}) == 2);
}
