#include "benchcost/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace benchcost {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw ScenarioError(what); }

double num(const json& j, const char* key, std::optional<double> dflt = {}) {
  if (!j.contains(key)) {
    if (dflt) return *dflt;
    fail(std::string("missing numeric key '") + key + "'");
  }
  if (!j.at(key).is_number()) fail(std::string("key '") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::string type_of(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    fail(std::string(what) + " needs a string 'type' field");
  return j.at("type").get<std::string>();
}

PriceDist parse_dist(const json& j) {
  const std::string t = type_of(j, "dist");
  if (t == "degenerate") return ParametricDist{Degenerate{num(j, "at", 0.0)}};
  if (t == "uniform")
    return ParametricDist{Uniform{num(j, "lo"), num(j, "hi")}};
  if (t == "triangular")
    return ParametricDist{
        Triangular{num(j, "center", 0.0), num(j, "halfwidth", 1.0)}};
  if (t == "truncated_gaussian")
    return ParametricDist{
        TruncatedGaussian{num(j, "sigma", 1.0), num(j, "halfwidth", 1.0)}};
  if (t == "atoms") {
    if (!j.contains("points") || !j.at("points").is_array())
      fail("atoms dist needs a 'points' array of [pos, mass] pairs");
    std::vector<Atom> atoms;
    for (const json& p : j.at("points")) {
      if (!p.is_array() || p.size() != 2) fail("atom entries are [pos, mass]");
      atoms.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return AtomDist(std::move(atoms));
  }
  if (t == "grid") {
    if (!j.contains("density") || !j.at("density").is_array())
      fail("grid dist needs a 'density' array");
    const auto& d = j.at("density");
    ArrayXd rho(d.size());
    for (size_t i = 0; i < d.size(); ++i) rho[i] = d[i].get<double>();
    return GridDist::from_density(num(j, "lo"), num(j, "hi"), std::move(rho));
  }
  fail("unknown dist type '" + t + "'");
}

CostModel parse_cost(const json& j) {
  if (!j.is_object()) fail("cost must be an object");
  const double k = num(j, "k", 0.0);
  if (!j.contains("variable")) return CostModel(k, ZeroCost{});
  const json& v = j.at("variable");
  const std::string t = type_of(v, "variable cost");
  if (t == "zero") return CostModel(k, ZeroCost{});
  if (t == "quadratic") return CostModel(k, QuadraticCost{num(v, "a", 1.0)});
  if (t == "power")
    return CostModel(k, PowerCost{num(v, "a", 1.0), num(v, "p", 2.0)});
  if (t == "table") {
    if (!v.contains("knots") || !v.at("knots").is_array())
      fail("table cost needs a 'knots' array of [q, c] pairs");
    std::vector<std::pair<double, double>> knots;
    for (const json& p : v.at("knots")) {
      if (!p.is_array() || p.size() != 2) fail("knot entries are [q, c]");
      knots.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return CostModel(k, ConvexTableCost(std::move(knots)));
  }
  fail("unknown variable cost type '" + t + "'");
}

BenchmarkSpec parse_benchmark(const json& j) {
  std::string kind;
  double tau = 0.0;
  std::vector<double> weights;
  if (j.is_string()) {
    kind = j.get<std::string>();
  } else if (j.is_object()) {
    if (!j.contains("kind") || !j.at("kind").is_string())
      fail("benchmark objects need a string 'kind'");
    kind = j.at("kind").get<std::string>();
    tau = num(j, "tau", 0.0);
    if (j.contains("weights"))
      weights = j.at("weights").get<std::vector<double>>();
  } else {
    fail("benchmarks are strings or objects");
  }
  if (kind == "mean") return BenchmarkSpec::mean();
  if (kind == "median") return BenchmarkSpec::median();
  if (kind == "trimmed" || kind == "trimmed_mean")
    return BenchmarkSpec::trimmed(tau);
  if (kind == "weighted_mean")
    return BenchmarkSpec{BenchmarkKind::WeightedMean, 0.0, std::move(weights)};
  if (kind == "median_of_medians") return BenchmarkSpec::median_of_medians();
  if (kind == "mean_of_medians") return BenchmarkSpec::mean_of_medians();
  fail("unknown benchmark kind '" + kind + "'");
}

SearchConfig parse_search(const json& j, SearchConfig base) {
  if (j.contains("n_atoms")) base.n_atoms = j.at("n_atoms").get<int>();
  if (j.contains("delta_grid")) base.delta_grid = j.at("delta_grid").get<int>();
  if (j.contains("mass_step")) base.mass_step = j.at("mass_step").get<int>();
  if (j.contains("refine_iters"))
    base.refine_iters = j.at("refine_iters").get<int>();
  if (j.contains("bench_tol")) base.bench_tol = num(j, "bench_tol");
  if (j.contains("threads")) base.threads = j.at("threads").get<int>();
  return base;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("scenario root must be a JSON object");

  Scenario sc;
  if (j.contains("id")) sc.id = j.at("id").get<std::string>();
  if (j.contains("dist")) sc.dist = parse_dist(j.at("dist"));
  if (j.contains("cost")) sc.cost = parse_cost(j.at("cost"));
  if (j.contains("population")) {
    const json& p = j.at("population");
    if (!p.is_object() || !p.contains("subpops") ||
        !p.at("subpops").is_array())
      fail("population needs a 'subpops' array");
    std::vector<Subpopulation> subs;
    for (const json& s : p.at("subpops")) {
      Subpopulation sub;
      sub.mu = num(s, "mu");
      if (!s.contains("dist")) fail("each subpop needs a 'dist'");
      sub.dist = parse_dist(s.at("dist"));
      if (s.contains("cost")) sub.cost = parse_cost(s.at("cost"));
      subs.push_back(std::move(sub));
    }
    try {
      sc.population.emplace(std::move(subs));
    } catch (const std::exception& e) {
      fail(std::string("invalid population: ") + e.what());
    }
  }
  if (!sc.dist && !sc.population)
    fail("scenario needs a 'dist' or a 'population'");
  if (j.contains("benchmarks")) {
    if (!j.at("benchmarks").is_array()) fail("'benchmarks' must be an array");
    for (const json& b : j.at("benchmarks"))
      sc.benchmarks.push_back(parse_benchmark(b));
  }
  if (j.contains("targets")) {
    if (!j.at("targets").is_array()) fail("'targets' must be an array");
    sc.targets = j.at("targets").get<std::vector<double>>();
  }
  if (j.contains("props")) {
    if (!j.at("props").is_array()) fail("'props' must be an array");
    sc.props = j.at("props").get<std::vector<std::string>>();
  }
  if (j.contains("tau_grid"))
    sc.tau_grid = j.at("tau_grid").get<std::vector<double>>();
  if (j.contains("oracle")) sc.search = parse_search(j.at("oracle"), sc.search);
  if (j.contains("gap_tol")) sc.gap_tol = num(j, "gap_tol");
  if (j.contains("out")) sc.out_path = j.at("out").get<std::string>();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

void write_csv(const Table& t, std::ostream& out) {
  if (!t.meta.empty()) out << "# " << t.meta << "\n";
  for (size_t i = 0; i < t.header.size(); ++i)
    out << (i ? "," : "") << t.header[i];
  out << "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

void write_csv_file(const Table& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write '" + path + "'");
  write_csv(t, out);
}

Table read_csv(std::istream& in) {
  Table t;
  std::string line;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.meta = line.size() > 1 ? line.substr(line[1] == ' ' ? 2 : 1) : "";
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    if (!header_done) {
      t.header = std::move(cells);
      header_done = true;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  if (!header_done) fail("CSV input has no header row");
  return t;
}

Table read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read '" + path + "'");
  return read_csv(in);
}

}  // namespace benchcost
