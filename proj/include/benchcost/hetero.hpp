#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "benchcost/attack.hpp"
#include "benchcost/bench.hpp"
#include "benchcost/cost.hpp"
#include "benchcost/dist.hpp"

namespace benchcost {

struct Subpopulation {
  double mu = 1.0;     // mass share
  PriceDist dist = ParametricDist{Uniform{-1.0, 1.0}};
  CostModel cost{1.0, ZeroCost{}};
};

// A finite mixture whose pooled density must be symmetric (validated at
// construction, center detected as the mixture mean).
class Population {
 public:
  explicit Population(std::vector<Subpopulation> subpops, double tol = 1e-9);

  const std::vector<Subpopulation>& subpops() const { return subpops_; }
  size_t size() const { return subpops_.size(); }
  double center() const { return center_; }

  double mixture_pdf(double x) const;
  double mixture_cdf(double x) const;
  std::pair<double, double> mixture_support() const;
  double mixture_quantile(double q) const;

 private:
  std::vector<Subpopulation> subpops_;
  double center_ = 0.0;
};

// Certifies that the set of subpopulations mirrors across `center` under the
// index pairing: mu_i f_i(x) = mu_{pair(i)} f_{pair(i)}(2 center - x).
struct SymmetryWitness {
  double center = 0.0;
  std::vector<int> pairing;
};

// Tries the identity pairing first, then mirror-sorting by subpopulation mean.
std::optional<SymmetryWitness> find_symmetry_witness(const Population& pop,
                                                     double tol = 1e-9);

// Per-price weights w_i = c_i'(P) / sum_j mu_j c_j'(P), so sum_i mu_i w_i = 1.
// Requires k_i = 0 and strictly convex c_i for all i.
std::vector<double> weighted_mean_weights(const Population& pop, double P);

// Population-level benchmark value. WeightedMean uses spec.weights when given
// (normalized by sum mu_i w_i), MedianOfMedians / MeanOfMedians take the
// classical unweighted median / mean of the subpopulation medians.
double evaluate(const BenchmarkSpec& spec, const Population& pop);

struct HeteroMeanAttack {
  std::vector<double> deltas;  // per-subpopulation shift (all equal to P)
  double cost = 0.0;           // sum_i mu_i c_i(P)
  double achieved = 0.0;       // weighted-mean value after the attack
  std::vector<double> weights;
};

// Optimal weighted-mean manipulation with no fixed costs: shift every
// subpopulation by P.
HeteroMeanAttack hetero_mean_attack(const Population& pop, double P);

// Lagrangian stationarity of the uniform shift: c_i'(P) = lambda * w_i with a
// single lambda across subpopulations, within tol.
bool stationarity_check(const Population& pop, double P, double tol = 1e-9);

// Structured oracle for the weighted-mean attack: grid over per-subpopulation
// shifts with the benchmark constraint eliminated on the last coordinate.
double hetero_mean_oracle(const Population& pop, double P, int grid = 4000);

struct HeteroMedianAttack {
  std::vector<TransportPlan> plans;
  double cost = 0.0;  // sum_i k_i mu_i (F_i(P) - 1/2)
};

// Symmetry-preserving median manipulation applied per subpopulation; requires
// zero variable costs, k_i > 0, and strictly single-peaked symmetric F_i.
HeteroMedianAttack hetero_median_attack(const Population& pop, double P);

// True iff c_i(x) = beta_i * c(x) for a common base shape (checked on a probe
// grid); a single weight vector is optimal for every target only then.
bool proportional_variable_costs(const Population& pop, double tol = 1e-9);

// Deterministic battery of witness-certified populations; true iff the
// statistic returns the witness center on all of them within tol.
bool doubly_symmetric_probe(
    const std::function<double(const Population&)>& statistic, double tol);
bool doubly_symmetric_probe(const BenchmarkSpec& spec, double tol = 1e-9);

// The three-uniform decomposition of Uniform(-1,1): U[-1,.4] (mass .7),
// U[.4,.8] (mass .2), U[.8,1] (mass .1).
struct Section4Report {
  std::vector<double> sub_medians;           // -0.3, 0.6, 0.9
  double median_of_medians = 0.0;            // 0.6
  double mean_of_medians = 0.0;              // 0.4 (unweighted)
  double mass_weighted_mean_of_medians = 0;  // 0.0
  std::vector<std::pair<std::string, double>> symmetric_values;  // all 0
  std::string note;
};

Section4Report section4_example();

}  // namespace benchcost
