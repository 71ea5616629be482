#pragma once

#include <string>
#include <vector>

#include "benchcost/bench.hpp"
#include "benchcost/cost.hpp"
#include "benchcost/dist.hpp"

namespace benchcost {

// Which mass a uniform-shift plan moves.
enum class MassSelector {
  AllMass,            // shift the whole distribution
  UpperHalf,          // shift the mass above the median
  TopOfDistribution,  // shift the top `mass` share
};

std::string to_string(MassSelector s);

// A one-shift manipulation: move `mass` of the distribution by `delta`.
// cost = mass * (k + c(delta)). delta carries the sign of the target.
struct UniformShiftPlan {
  double delta = 0.0;
  double mass = 0.0;
  MassSelector selector = MassSelector::TopOfDistribution;
  double cost = 0.0;
  double achieved = 0.0;
  bool attained = true;  // false when only an unattained infimum exists
  std::string note;
};

// Minimum-cost manipulation of the mean to target P: minimizes
// P * cbar(delta) over delta >= P. Rejects P = 0.
UniformShiftPlan mean_attack(const CostModel& m, double P);

struct MedianAttack {
  double cost = 0.0;
  double moved_mass = 0.0;
};

// Cost k (F(P) - 1/2) of raising the median to P with zero variable cost.
// P at or below the median of F yields the trivial zero-cost plan.
MedianAttack median_attack_cost(double k, const PriceDist& F, double P);

// The symmetry-preserving median manipulation: every price y < P keeps a
// point mass alpha(y) = (f(y) + f(y-2P)) / (2 f(y)) in place and spreads the
// rest over [P, inf) with density proportional to g(x) - f(x), where
// g(x) = (f(x) + f(x-2P)) / 2 is the induced final density.
struct TransportPlan {
  PriceDist source;
  GridDist induced;     // final density; equals g within quadrature error
  ArrayXd alpha;        // retained point mass per induced-grid cell below P
  double target = 0.0;  // the price P the plan implements
  double moved_mass = 0.0;
  double cost = 0.0;    // k * moved_mass
};

// Requires F strictly single-peaked and symmetric around 0, and P inside the
// interior of the upper half of the support.
TransportPlan median_symmetric_construction(const PriceDist& F, double P,
                                            double k = 0.0,
                                            int grid_cells = kDefaultGridCells);

// Minimum-cost manipulation of the tau-trimmed mean when unmanipulated
// prices are degenerate at 0: delta solves the first-order condition
//   -P (1-2tau) (cbar(delta) - c'(delta)) / delta + tau c'(delta) = 0
// on (0, delta_min), clamped below by P. Rejects tau = 0.5 and P <= 0.
UniformShiftPlan trimmed_attack(const CostModel& m, double tau, double P);

// The trimming quantile (1/2)(1 - c'(2P)/cbar(2P)) that is optimal in the
// no-dispersion case with delta_min > 2P; returns 0 at delta_min = 2P and
// throws (naming the applicable proposition) when delta_min < 2P.
double optimal_tau(const CostModel& m, double P);

struct CostCurveRow {
  double tau = 0.0;
  double delta = 0.0;
  double mass = 0.0;
  double cost = 0.0;
};

// trimmed_attack evaluated over a tau grid (no-dispersion setting).
std::vector<CostCurveRow> attack_cost_curve(const CostModel& m, double P,
                                            const std::vector<double>& taus);

// Final distribution after applying a uniform-shift plan to F. Degenerate
// sources yield atoms; everything else a grid.
PriceDist induced_final(const PriceDist& F, const UniformShiftPlan& plan,
                        int grid_cells = kDefaultGridCells);

// Certificate that the manipulation fools every symmetric benchmark at once:
// the final distribution is symmetric around P and
// every symmetric benchmark in the library evaluates to P, both within tol.
bool symmetry_certificate(const PriceDist& final_dist, double P, double tol);

}  // namespace benchcost
