#include "benchcost/cost.hpp"

#include <algorithm>
#include <cmath>

namespace benchcost {
namespace {

// Golden-section minimization of f on [lo, hi] to the given argument tolerance.
template <class F>
double golden_section_min(F&& f, double lo, double hi, double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

// --------------------------- ConvexTableCost --------------------------------

ConvexTableCost::ConvexTableCost(std::vector<std::pair<double, double>> knots)
    : knots_(std::move(knots)) {
  if (knots_.size() < 2)
    throw std::invalid_argument("ConvexTableCost: need at least 2 knots");
  std::sort(knots_.begin(), knots_.end());
  if (knots_.front().first != 0.0 || knots_.front().second != 0.0)
    throw std::invalid_argument("ConvexTableCost: first knot must be (0, 0)");
  double prev_slope = -kInfinitePrice;
  strict_ = true;
  for (size_t i = 1; i < knots_.size(); ++i) {
    const double dq = knots_[i].first - knots_[i - 1].first;
    if (!(dq > 0.0))
      throw std::invalid_argument("ConvexTableCost: duplicate knot abscissa");
    const double slope = (knots_[i].second - knots_[i - 1].second) / dq;
    if (slope < prev_slope - 1e-15)
      throw std::invalid_argument("ConvexTableCost: slopes must not decrease");
    if (slope <= prev_slope + 1e-15) strict_ = false;
    prev_slope = slope;
  }
}

double ConvexTableCost::value(double q) const {
  const double x = std::abs(q);
  size_t i = 1;
  while (i + 1 < knots_.size() && knots_[i].first < x) ++i;
  const auto& [q0, c0] = knots_[i - 1];
  const auto& [q1, c1] = knots_[i];
  const double slope = (c1 - c0) / (q1 - q0);
  return c0 + slope * (x - q0);
}

double ConvexTableCost::derivative(double q) const {
  if (q == 0.0) return 0.0;
  const double x = std::abs(q);
  size_t i = 1;
  // Right slope at interior knots (one-sided convention).
  while (i + 1 < knots_.size() && knots_[i].first <= x) ++i;
  const auto& [q0, c0] = knots_[i - 1];
  const auto& [q1, c1] = knots_[i];
  const double slope = (c1 - c0) / (q1 - q0);
  return q > 0.0 ? slope : -slope;
}

// ------------------------------ CostModel -----------------------------------

CostModel::CostModel(double k, VariableCost variable)
    : k_(k), variable_(std::move(variable)) {
  if (k_ < 0.0) throw std::invalid_argument("CostModel: k must be >= 0");
  if (std::holds_alternative<ZeroCost>(variable_) && k_ == 0.0)
    throw std::invalid_argument(
        "CostModel: zero variable cost with k = 0 makes every attack free");
  if (const auto* quad = std::get_if<QuadraticCost>(&variable_)) {
    if (!(quad->a > 0.0))
      throw std::invalid_argument("QuadraticCost: a must be > 0");
  }
  if (const auto* pw = std::get_if<PowerCost>(&variable_)) {
    if (!(pw->a > 0.0) || !(pw->p > 1.0))
      throw std::invalid_argument("PowerCost: require a > 0 and p > 1");
  }
}

double CostModel::variable_cost(double q) const {
  return std::visit(
      [q](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ZeroCost>) return 0.0;
        else if constexpr (std::is_same_v<T, QuadraticCost>) return v.a * q * q;
        else if constexpr (std::is_same_v<T, PowerCost>)
          return v.a * std::pow(std::abs(q), v.p);
        else return v.value(q);
      },
      variable_);
}

double CostModel::marginal_cost(double q) const {
  return std::visit(
      [q](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ZeroCost>) return 0.0;
        else if constexpr (std::is_same_v<T, QuadraticCost>) return 2.0 * v.a * q;
        else if constexpr (std::is_same_v<T, PowerCost>) {
          if (q == 0.0) return 0.0;
          const double mag = v.a * v.p * std::pow(std::abs(q), v.p - 1.0);
          return q > 0.0 ? mag : -mag;
        } else {
          return v.derivative(q);
        }
      },
      variable_);
}

double CostModel::average_cost(double q) const {
  if (q == 0.0) throw std::invalid_argument("average_cost: q must be nonzero");
  return (k_ + variable_cost(q)) / std::abs(q);
}

double CostModel::delta_min() const {
  if (std::holds_alternative<ZeroCost>(variable_)) return kInfinitePrice;
  if (k_ == 0.0) return 0.0;
  if (const auto* quad = std::get_if<QuadraticCost>(&variable_))
    return std::sqrt(k_ / quad->a);
  if (const auto* pw = std::get_if<PowerCost>(&variable_))
    return std::pow(k_ / (pw->a * (pw->p - 1.0)), 1.0 / pw->p);
  // Table: bracket the minimum by doubling, then golden-section.
  const auto cbar = [this](double q) { return average_cost(q); };
  double hi = 1.0;
  while (cbar(2.0 * hi) < cbar(hi)) {
    hi *= 2.0;
    if (hi > 1e9) return kInfinitePrice;
  }
  return golden_section_min(cbar, 1e-12, 2.0 * hi, 1e-9);
}

bool CostModel::strictly_convex() const {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ZeroCost>) return false;
        else if constexpr (std::is_same_v<T, ConvexTableCost>)
          return v.strictly_convex();
        else return true;
      },
      variable_);
}

bool CostModel::zero_variable() const {
  return std::holds_alternative<ZeroCost>(variable_);
}

}  // namespace benchcost
