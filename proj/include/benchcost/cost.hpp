#pragma once

#include <limits>
#include <stdexcept>
#include <variant>
#include <vector>

namespace benchcost {

// Sentinel for "average cost decreasing on all of (0, inf)", ordered above
// every finite price.
inline constexpr double kInfinitePrice =
    std::numeric_limits<double>::infinity();

struct ZeroCost {};

// c(q) = a q^2
struct QuadraticCost {
  double a = 1.0;
};

// c(q) = a |q|^p, p > 1
struct PowerCost {
  double a = 1.0;
  double p = 2.0;
};

// Piecewise-linear symmetric convex cost given by knots (q_i, c(q_i)) with
// q_0 = 0, c_0 = 0 and non-decreasing segment slopes. Extrapolates the last
// slope beyond the final knot. One-sided (right) slopes at knots.
class ConvexTableCost {
 public:
  explicit ConvexTableCost(std::vector<std::pair<double, double>> knots);

  double value(double q) const;
  double derivative(double q) const;
  bool strictly_convex() const { return strict_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

 private:
  std::vector<std::pair<double, double>> knots_;
  bool strict_ = false;
};

using VariableCost =
    std::variant<ZeroCost, QuadraticCost, PowerCost, ConvexTableCost>;

// Fixed cost k per touched price plus symmetric convex variable cost c(q).
class CostModel {
 public:
  // Rejects k < 0 and the fully-free model (Zero variable cost with k = 0).
  CostModel(double k, VariableCost variable);
  CostModel() : CostModel(1.0, ZeroCost{}) {}

  double fixed() const { return k_; }
  const VariableCost& variable() const { return variable_; }

  double variable_cost(double q) const;
  double marginal_cost(double q) const;

  // (k + c(q)) / |q|; rejects q = 0.
  double average_cost(double q) const;

  // Unique minimizer of the average cost on (0, inf); kInfinitePrice when the
  // average cost is everywhere decreasing, 0 when k = 0 and c strictly convex.
  double delta_min() const;

  bool strictly_convex() const;
  bool zero_variable() const;

 private:
  double k_;
  VariableCost variable_;
};

}  // namespace benchcost
