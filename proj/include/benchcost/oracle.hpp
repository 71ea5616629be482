#pragma once

#include <optional>
#include <string>
#include <vector>

#include "benchcost/attack.hpp"
#include "benchcost/bench.hpp"
#include "benchcost/cost.hpp"
#include "benchcost/dist.hpp"
#include "benchcost/hetero.hpp"

namespace benchcost {

struct SearchConfig {
  int n_atoms = 2000;        // equal-mass discretization of F
  int delta_grid = 4000;     // resolution of the shift bracket
  int mass_step = 1;         // atom-count granularity of the moved set
  int refine_iters = 60;     // bisection iterations per candidate set
  double bench_tol = 1e-4;   // |achieved - P| tolerance for feasibility
  int threads = 1;

  void validate() const;
};

// One brute-force manipulation of an equal-mass atomization: dest[i] is where
// atom i lands (== source[i] when untouched).
struct DiscreteManipulation {
  std::vector<double> source;
  std::vector<double> dest;
  double cost = 0.0;
  double achieved = 0.0;
  double delta = 0.0;       // common shift of the winning plan (0 for median family)
  double moved_mass = 0.0;
  bool feasible = false;
  std::string family;       // which structured family won
};

// Brute-force minimum over structured plan families (uniform shifts of
// top/bottom/contiguous atom windows, the exact combinatorial median move,
// and a coarse two-level family). Deterministic for fixed config, regardless
// of cfg.threads; an explicit infeasible result when no plan reaches P.
DiscreteManipulation min_cost_attack(const PriceDist& F, const CostModel& m,
                                     const BenchmarkSpec& spec, double P,
                                     const SearchConfig& cfg = {});

struct PropositionReport {
  std::string prop_id;
  std::string scenario_id;
  double closed_form_cost = 0.0;
  double oracle_cost = 0.0;
  double abs_gap = 0.0;
  bool symmetry_pass = false;
  std::string status;  // "pass" | "fail" | "hypotheses_unmet"
  std::string notes;
};

struct VerifyScenario {
  std::string id;
  PriceDist dist = ParametricDist{Degenerate{0.0}};
  CostModel cost{1.0, ZeroCost{}};
  double target = 1.0;
  std::optional<Population> population;  // P6 checks
  SearchConfig search;
  std::vector<double> tau_grid = {0.0, 0.1, 0.2, 0.3, 0.4};  // P5 sweep
  double gap_tol = 1e-3;
};

// Runs closed form and oracle for one proposition id in
// {P2_mean, P2_median, P3, P4, P5, P6_weighted, P6_median} and reports
// agreement plus the symmetry certificate where claimed.
PropositionReport verify_proposition(const std::string& prop_id,
                                     const VerifyScenario& scenario);

}  // namespace benchcost
