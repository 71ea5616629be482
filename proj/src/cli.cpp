#include "benchcost/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI/CLI.hpp>

#include "benchcost/attack.hpp"
#include "benchcost/bench.hpp"
#include "benchcost/hetero.hpp"
#include "benchcost/oracle.hpp"
#include "benchcost/scenario.hpp"

namespace benchcost {
namespace {

constexpr int kOk = 0, kConfigError = 2, kInfeasible = 3, kVerifyFailed = 4;

struct Flags {
  std::string scenario_path;
  std::string out;
  std::optional<int> grid_n;
  std::optional<double> tol;
  std::optional<int> threads;
  std::optional<unsigned> seed;  // reserved for randomized probe batteries
  std::vector<std::string> props;
};

Scenario load(const Flags& f) {
  Scenario sc = load_scenario(f.scenario_path);
  if (f.grid_n) sc.search.n_atoms = *f.grid_n;
  if (f.tol) {
    sc.search.bench_tol = *f.tol;
    sc.gap_tol = *f.tol;
  }
  if (f.threads) sc.search.threads = *f.threads;
  if (!f.out.empty()) sc.out_path = f.out;
  if (!f.props.empty()) sc.props = f.props;
  return sc;
}

void emit(const Table& t, const Scenario& sc) {
  if (sc.out_path.empty())
    write_csv(t, std::cout);
  else
    write_csv_file(t, sc.out_path);
}

const CostModel& require_cost(const Scenario& sc) {
  if (!sc.cost) throw ScenarioError("this subcommand needs a 'cost' entry");
  return *sc.cost;
}

const PriceDist& require_dist(const Scenario& sc) {
  if (!sc.dist) throw ScenarioError("this subcommand needs a 'dist' entry");
  return *sc.dist;
}

int run_evaluate(const Flags& f) {
  const Scenario sc = load(f);
  if (sc.benchmarks.empty())
    throw ScenarioError("evaluate needs a non-empty 'benchmarks' list");
  Table t;
  t.meta = "evaluate " + sc.id;
  t.header = {"benchmark", "value"};
  for (const BenchmarkSpec& b : sc.benchmarks) {
    const double v = b.population_only() || sc.population
                         ? evaluate(b, *sc.population)
                         : evaluate(b, require_dist(sc));
    t.rows.push_back({b.label(), format_number(v)});
  }
  emit(t, sc);
  return kOk;
}

bool is_degenerate(const PriceDist& d) {
  const auto* p = std::get_if<ParametricDist>(&d);
  return p && std::holds_alternative<Degenerate>(*p);
}

int run_attack(const Flags& f) {
  const Scenario sc = load(f);
  if (sc.benchmarks.empty() || sc.targets.empty())
    throw ScenarioError("attack needs 'benchmarks' and 'targets'");
  const PriceDist& dist = require_dist(sc);
  const CostModel& cost = require_cost(sc);
  Table t;
  t.meta = "attack " + sc.id;
  t.header = {"benchmark", "tau",  "P",        "delta",
              "Delta_mass", "cost", "achieved", "symmetric_final"};
  bool all_attained = true;
  for (const BenchmarkSpec& b : sc.benchmarks) {
    for (double P : sc.targets) {
      double tau = 0.0, delta = 0.0, mass = 0.0, atk_cost = 0.0, achieved = P;
      bool symmetric = false;
      if (b.kind == BenchmarkKind::Mean ||
          (b.kind == BenchmarkKind::TrimmedMean && b.tau < 0.5)) {
        UniformShiftPlan plan;
        if (b.kind == BenchmarkKind::Mean) {
          plan = mean_attack(cost, P);
        } else {
          if (!is_degenerate(dist))
            throw ScenarioError(
                "trimmed-mean attacks assume a degenerate 'dist'");
          tau = b.tau;
          plan = trimmed_attack(cost, b.tau, P);
        }
        all_attained = all_attained && plan.attained;
        delta = plan.delta;
        mass = plan.mass;
        atk_cost = plan.cost;
        achieved = plan.achieved;
        symmetric = plan.attained &&
                    symmetry_certificate(induced_final(dist, plan), P, 1e-6);
      } else if (b.kind == BenchmarkKind::Median ||
                 b.kind == BenchmarkKind::TrimmedMean) {
        if (!cost.zero_variable())
          throw ScenarioError("median attacks assume zero variable cost");
        tau = 0.5;
        const MedianAttack med = median_attack_cost(cost.fixed(), dist, P);
        mass = med.moved_mass;
        atk_cost = med.cost;
        if (strictly_single_peaked(dist) && is_symmetric(dist, 0.0, 1e-9) &&
            med.moved_mass > 0.0) {
          const TransportPlan plan =
              median_symmetric_construction(dist, P, cost.fixed());
          symmetric = is_symmetric(PriceDist{plan.induced}, P, 1e-6);
        }
      } else {
        throw ScenarioError("attack supports mean/median/trimmed benchmarks");
      }
      t.rows.push_back({b.label(), format_number(tau), format_number(P),
                        format_number(delta), format_number(mass),
                        format_number(atk_cost), format_number(achieved),
                        symmetric ? "1" : "0"});
    }
  }
  emit(t, sc);
  return all_attained ? kOk : kInfeasible;
}

int run_sweep_tau(const Flags& f) {
  const Scenario sc = load(f);
  if (sc.targets.empty()) throw ScenarioError("sweep-tau needs 'targets'");
  const CostModel& cost = require_cost(sc);
  Table t;
  t.meta = "sweep-tau " + sc.id;
  t.header = {"tau", "P", "delta", "Delta_mass", "cost"};
  for (double P : sc.targets)
    for (const CostCurveRow& row : attack_cost_curve(cost, P, sc.tau_grid))
      t.rows.push_back({format_number(row.tau), format_number(P),
                        format_number(row.delta), format_number(row.mass),
                        format_number(row.cost)});
  emit(t, sc);
  return kOk;
}

int run_verify(const Flags& f) {
  const Scenario sc = load(f);
  if (sc.props.empty())
    throw ScenarioError("verify needs 'props' (or --prop) ids");
  if (sc.targets.empty()) throw ScenarioError("verify needs 'targets'");
  Table t;
  t.meta = "verify " + sc.id;
  t.header = {"prop_id",     "scenario_id", "closed_form_cost", "oracle_cost",
              "abs_gap",     "symmetry_pass", "status"};
  bool unmet = false, failed = false;
  for (const std::string& prop : sc.props) {
    for (double P : sc.targets) {
      VerifyScenario vs;
      vs.id = sc.id + "/P=" + format_number(P);
      if (sc.dist) vs.dist = *sc.dist;
      if (sc.cost) vs.cost = *sc.cost;
      vs.target = P;
      vs.population = sc.population;
      vs.search = sc.search;
      vs.tau_grid = sc.tau_grid;
      vs.gap_tol = sc.gap_tol;
      const PropositionReport r = verify_proposition(prop, vs);
      unmet = unmet || r.status == "hypotheses_unmet";
      failed = failed || r.status == "fail";
      t.rows.push_back({r.prop_id, r.scenario_id,
                        format_number(r.closed_form_cost),
                        format_number(r.oracle_cost), format_number(r.abs_gap),
                        r.symmetry_pass ? "1" : "0", r.status});
    }
  }
  emit(t, sc);
  if (failed) return kVerifyFailed;
  return unmet ? kInfeasible : kOk;
}

// Ranks the rows of an attack CSV by cost (most expensive first) per target.
int run_compare(const std::string& csv_path, const std::string& out) {
  const Table in = read_csv_file(csv_path);
  const auto col = [&](const std::string& name) {
    const auto it = std::find(in.header.begin(), in.header.end(), name);
    if (it == in.header.end())
      throw ScenarioError("input CSV lacks a '" + name + "' column");
    return static_cast<size_t>(it - in.header.begin());
  };
  const size_t cb = col("benchmark"), cp = col("P"), cc = col("cost");
  struct Row {
    double P, cost;
    std::string benchmark;
  };
  std::vector<Row> rows;
  for (const auto& r : in.rows)
    rows.push_back({std::stod(r[cp]), std::stod(r[cc]), r[cb]});
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.P != b.P ? a.P < b.P : a.cost > b.cost;
  });
  Table t;
  t.meta = "compare " + csv_path;
  t.header = {"P", "rank", "benchmark", "cost"};
  int rank = 0;
  double last_p = std::nan("");
  for (const Row& r : rows) {
    rank = r.P == last_p ? rank + 1 : 1;
    last_p = r.P;
    t.rows.push_back({format_number(r.P), std::to_string(rank), r.benchmark,
                      format_number(r.cost)});
  }
  Scenario dummy;
  dummy.out_path = out;
  emit(t, dummy);
  return kOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Benchmark manipulation-cost toolkit"};
  app.require_subcommand(1);

  Flags f;
  std::string compare_csv;
  const auto add_common = [&](CLI::App* cmd, bool scenario_based) {
    if (scenario_based)
      cmd->add_option("scenario", f.scenario_path, "JSON scenario file")
          ->required();
    cmd->add_option("--out", f.out, "output CSV path (default: stdout)");
    cmd->add_option("--grid-n", f.grid_n, "oracle atom count override");
    cmd->add_option("--tol", f.tol, "tolerance override");
    cmd->add_option("--threads", f.threads, "solver thread cap");
    cmd->add_option("--seed", f.seed, "seed for optional randomized probes");
  };

  CLI::App* ev = app.add_subcommand("evaluate", "benchmark values on the input");
  add_common(ev, true);
  CLI::App* at = app.add_subcommand("attack", "closed-form attack plans");
  add_common(at, true);
  CLI::App* sw = app.add_subcommand("sweep-tau", "attack cost over a tau grid");
  add_common(sw, true);
  CLI::App* ve = app.add_subcommand("verify", "closed form vs oracle");
  add_common(ve, true);
  ve->add_option("--prop", f.props, "proposition ids to verify");
  CLI::App* cp = app.add_subcommand("compare", "rank an attack CSV by cost");
  cp->add_option("csv", compare_csv, "attack CSV to rank")->required();
  cp->add_option("--out", f.out, "output CSV path (default: stdout)");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*ev) return run_evaluate(f);
    if (*at) return run_attack(f);
    if (*sw) return run_sweep_tau(f);
    if (*ve) return run_verify(f);
    if (*cp) return run_compare(compare_csv, f.out);
  } catch (const ScenarioError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::domain_error& e) {
    std::cerr << "hypotheses unmet: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace benchcost
