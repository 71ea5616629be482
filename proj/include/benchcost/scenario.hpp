#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "benchcost/bench.hpp"
#include "benchcost/cost.hpp"
#include "benchcost/dist.hpp"
#include "benchcost/hetero.hpp"
#include "benchcost/oracle.hpp"

namespace benchcost {

// Config / schema problems; the CLI maps these to exit code 2.
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One declarative experiment: an input (single distribution or population),
// a cost model, the benchmarks and targets to attack, and solver overrides.
struct Scenario {
  std::string id = "scenario";
  std::optional<PriceDist> dist;
  std::optional<Population> population;
  std::optional<CostModel> cost;  // single-distribution scenarios
  std::vector<BenchmarkSpec> benchmarks;
  std::vector<double> targets;
  std::vector<std::string> props;  // verify_proposition ids
  std::vector<double> tau_grid = {0.0, 0.1, 0.2, 0.3, 0.4};
  SearchConfig search;
  double gap_tol = 1e-3;
  std::string out_path;
};

// Parses the JSON scenario file / text; throws ScenarioError with a message
// naming the offending key.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

// ---------------------------------------------------------------------------
// CSV tables: one '#'-prefixed metadata line, a header row, then data rows.
// Values use '.' decimals and shortest round-trippable formatting, so a fixed
// scenario always produces byte-identical files.
// ---------------------------------------------------------------------------

struct Table {
  std::string meta;  // written as "# <meta>"
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_number(double x);  // %.9g; "inf"/"nan" spelled out

void write_csv(const Table& t, std::ostream& out);
void write_csv_file(const Table& t, const std::string& path);
Table read_csv(std::istream& in);
Table read_csv_file(const std::string& path);

}  // namespace benchcost
