#include "benchcost/hetero.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace benchcost {
namespace {

constexpr int kProbes = 1024;

double subpop_pdf(const Subpopulation& s, double x) {
  const auto [lo, hi] = support(s.dist);
  if (x < lo || x > hi) return 0.0;
  return pdf(s.dist, x);
}

double classical_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Population::Population(std::vector<Subpopulation> subpops, double tol)
    : subpops_(std::move(subpops)) {
  if (subpops_.empty())
    throw std::invalid_argument("Population: no subpopulations");
  double total = 0.0;
  for (const Subpopulation& s : subpops_) {
    if (!(s.mu > 0.0))
      throw std::invalid_argument("Population: subpopulation mass must be > 0");
    total += s.mu;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("Population: masses must sum to 1");
  for (const Subpopulation& s : subpops_) center_ += s.mu * mean(s.dist);

  // The pooled distribution must be symmetric. CDF-based probe: for a
  // distribution symmetric around c, F(c-x) + F(c+x) = 1 off atoms.
  const auto [lo, hi] = mixture_support();
  const double span = std::max(center_ - lo, hi - center_);
  const double probe_tol = std::max(tol, 1e-9);
  for (int j = 0; j < kProbes; ++j) {
    const double off = span * (j + 0.5) / kProbes;
    const double sum =
        mixture_cdf(center_ - off) + mixture_cdf(center_ + off);
    if (std::abs(sum - 1.0) > probe_tol)
      throw std::invalid_argument(
          "Population: pooled distribution is not symmetric");
  }
}

double Population::mixture_pdf(double x) const {
  double s = 0.0;
  for (const Subpopulation& sub : subpops_) s += sub.mu * subpop_pdf(sub, x);
  return s;
}

double Population::mixture_cdf(double x) const {
  double s = 0.0;
  for (const Subpopulation& sub : subpops_) s += sub.mu * cdf(sub.dist, x);
  return s;
}

std::pair<double, double> Population::mixture_support() const {
  double lo = kInfinitePrice, hi = -kInfinitePrice;
  for (const Subpopulation& s : subpops_) {
    const auto [a, b] = support(s.dist);
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  return {lo, hi};
}

double Population::mixture_quantile(double q) const {
  if (q < 0.0 || q > 1.0)
    throw std::invalid_argument("mixture_quantile: q outside [0,1]");
  auto [lo, hi] = mixture_support();
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mixture_cdf(mid) < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::optional<SymmetryWitness> find_symmetry_witness(const Population& pop,
                                                     double tol) {
  const double c = pop.center();
  const auto [lo, hi] = pop.mixture_support();
  const double span = std::max(c - lo, hi - c);

  const auto pair_ok = [&](int i, int j) {
    const auto& a = pop.subpops()[i];
    const auto& b = pop.subpops()[j];
    for (int t = 0; t < 128; ++t) {
      const double x = c - span + 2.0 * span * (t + 0.5) / 128;
      if (std::abs(a.mu * subpop_pdf(a, x) -
                   b.mu * subpop_pdf(b, 2.0 * c - x)) > tol)
        return false;
    }
    return true;
  };

  const int n = static_cast<int>(pop.size());
  SymmetryWitness w;
  w.center = c;
  w.pairing.resize(n);

  // Identity pairing: every subpopulation is itself symmetric around c.
  bool identity = true;
  for (int i = 0; i < n && identity; ++i) identity = pair_ok(i, i);
  if (identity) {
    std::iota(w.pairing.begin(), w.pairing.end(), 0);
    return w;
  }

  // Mirror-sort by subpopulation mean: pair the j-th lowest with the j-th
  // highest.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return mean(pop.subpops()[i].dist) < mean(pop.subpops()[j].dist);
  });
  for (int j = 0; j < n; ++j) {
    const int i = order[j], k = order[n - 1 - j];
    if (!pair_ok(i, k)) return std::nullopt;
    w.pairing[i] = k;
  }
  return w;
}

std::vector<double> weighted_mean_weights(const Population& pop, double P) {
  if (P == 0.0)
    throw std::invalid_argument("weighted_mean_weights: P must be nonzero");
  double denom = 0.0;
  std::vector<double> marginals;
  for (const Subpopulation& s : pop.subpops()) {
    if (s.cost.fixed() != 0.0)
      throw std::invalid_argument(
          "weighted_mean_weights: requires zero fixed costs");
    if (!s.cost.strictly_convex())
      throw std::invalid_argument(
          "weighted_mean_weights: requires strictly convex variable costs");
    marginals.push_back(s.cost.marginal_cost(P));
    denom += s.mu * marginals.back();
  }
  if (denom == 0.0)
    throw std::invalid_argument(
        "weighted_mean_weights: all marginal costs vanish at P");
  std::vector<double> w(marginals.size());
  for (size_t i = 0; i < w.size(); ++i) w[i] = marginals[i] / denom;
  return w;
}

double evaluate(const BenchmarkSpec& spec, const Population& pop) {
  if (!spec.population_only())
    throw std::invalid_argument("evaluate: " + spec.label() +
                                " applies to single distributions only");
  switch (spec.kind) {
    case BenchmarkKind::WeightedMean: {
      if (spec.weights.size() != pop.size())
        throw std::invalid_argument(
            "evaluate: weighted_mean needs one weight per subpopulation");
      double num = 0.0, den = 0.0;
      for (size_t i = 0; i < pop.size(); ++i) {
        const Subpopulation& s = pop.subpops()[i];
        num += s.mu * spec.weights[i] * mean(s.dist);
        den += s.mu * spec.weights[i];
      }
      if (den == 0.0)
        throw std::invalid_argument("evaluate: weights sum to zero");
      return num / den;
    }
    case BenchmarkKind::MedianOfMedians: {
      std::vector<double> med;
      for (const Subpopulation& s : pop.subpops())
        med.push_back(median(s.dist));
      return classical_median(std::move(med));
    }
    case BenchmarkKind::MeanOfMedians: {
      double s = 0.0;
      for (const Subpopulation& sub : pop.subpops())
        s += median(sub.dist);
      return s / static_cast<double>(pop.size());
    }
    default:
      throw std::invalid_argument("evaluate: unsupported population kind");
  }
}

HeteroMeanAttack hetero_mean_attack(const Population& pop, double P) {
  HeteroMeanAttack attack;
  attack.weights = weighted_mean_weights(pop, P);
  attack.deltas.assign(pop.size(), P);
  for (size_t i = 0; i < pop.size(); ++i)
    attack.cost += pop.subpops()[i].mu *
                   pop.subpops()[i].cost.variable_cost(P);
  // Weighted mean after shifting every subpopulation by P.
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < pop.size(); ++i) {
    const Subpopulation& s = pop.subpops()[i];
    num += s.mu * attack.weights[i] * (mean(s.dist) + P);
    den += s.mu * attack.weights[i];
  }
  attack.achieved = num / den;
  if (std::abs(attack.achieved - P) > 1e-6 * std::max(1.0, std::abs(P)))
    throw std::logic_error(
        "hetero_mean_attack: uniform shift misses the weighted-mean target");
  return attack;
}

bool stationarity_check(const Population& pop, double P, double tol) {
  const std::vector<double> w = weighted_mean_weights(pop, P);
  double lambda = 0.0;
  bool first = true;
  for (size_t i = 0; i < pop.size(); ++i) {
    if (w[i] == 0.0) continue;
    const double l = pop.subpops()[i].cost.marginal_cost(P) / w[i];
    if (first) {
      lambda = l;
      first = false;
    } else if (std::abs(l - lambda) > tol * std::max(1.0, std::abs(lambda))) {
      return false;
    }
  }
  return !first;
}

double hetero_mean_oracle(const Population& pop, double P, int grid) {
  const std::vector<double> w = weighted_mean_weights(pop, P);
  const int n = static_cast<int>(pop.size());
  double base = 0.0, wsum = 0.0;
  for (int i = 0; i < n; ++i) {
    base += pop.subpops()[i].mu * w[i] * mean(pop.subpops()[i].dist);
    wsum += pop.subpops()[i].mu * w[i];
  }
  // Constraint: sum_i mu_i w_i delta_i = P * wsum - base.
  const double rhs = P * wsum - base;
  const double span = 2.0 * std::abs(P);
  const int per_dim = n == 2 ? grid : std::max(64, grid / (1 << (n - 2)));

  double best = kInfinitePrice;
  std::vector<double> deltas(n, 0.0);
  const std::function<void(int, double, double)> scan =
      [&](int i, double partial_constraint, double partial_cost) {
        const Subpopulation& s = pop.subpops()[i];
        if (i == n - 1) {
          const double coef = s.mu * w[i];
          if (coef == 0.0) return;
          const double d = (rhs - partial_constraint) / coef;
          const double cost = partial_cost + s.mu * s.cost.variable_cost(d);
          if (cost < best) best = cost;
          return;
        }
        for (int g = 0; g <= per_dim; ++g) {
          const double d = -span + 2.0 * span * g / per_dim;
          scan(i + 1, partial_constraint + s.mu * w[i] * d,
               partial_cost + s.mu * s.cost.variable_cost(d));
        }
      };
  scan(0, 0.0, 0.0);
  return best;
}

HeteroMedianAttack hetero_median_attack(const Population& pop, double P) {
  HeteroMedianAttack attack;
  for (const Subpopulation& s : pop.subpops()) {
    if (!s.cost.zero_variable())
      throw std::invalid_argument(
          "hetero_median_attack: requires zero variable costs");
    if (!(s.cost.fixed() > 0.0))
      throw std::invalid_argument("hetero_median_attack: requires k > 0");
    attack.plans.push_back(
        median_symmetric_construction(s.dist, P, s.cost.fixed()));
    attack.cost += s.mu * attack.plans.back().cost;
  }
  return attack;
}

bool proportional_variable_costs(const Population& pop, double tol) {
  if (pop.size() < 2) return true;
  const CostModel& base = pop.subpops()[0].cost;
  for (size_t i = 1; i < pop.size(); ++i) {
    const CostModel& ci = pop.subpops()[i].cost;
    // c_i(q) * c_0(1) == c_0(q) * c_i(1) on a probe grid.
    const double b1 = base.variable_cost(1.0), ci1 = ci.variable_cost(1.0);
    for (int t = 1; t <= 64; ++t) {
      const double q = 4.0 * t / 64.0;
      const double lhs = ci.variable_cost(q) * b1;
      const double rhs = base.variable_cost(q) * ci1;
      if (std::abs(lhs - rhs) > tol * std::max(1.0, std::abs(rhs)))
        return false;
    }
  }
  return true;
}

namespace {

std::vector<Population> doubly_symmetric_battery() {
  const auto quad = [](double a) {
    return CostModel(0.0, QuadraticCost{a});
  };
  std::vector<Population> battery;
  // Identity witness: every subpopulation symmetric around 0.
  battery.push_back(Population({
      {0.5, ParametricDist{Uniform{-1.0, 1.0}}, quad(1.0)},
      {0.3, ParametricDist{Triangular{0.0, 0.5}}, quad(2.0)},
      {0.2, ParametricDist{TruncatedGaussian{0.3, 1.0}}, quad(0.7)},
  }));
  // One mirrored pair.
  battery.push_back(Population({
      {0.5, ParametricDist{Uniform{-0.8, -0.2}}, quad(1.0)},
      {0.5, ParametricDist{Uniform{0.2, 0.8}}, quad(1.0)},
  }));
  // Two mirrored pairs with unequal masses; mirrored partners share costs.
  battery.push_back(Population({
      {0.3, ParametricDist{Uniform{-1.0, -0.2}}, quad(2.0)},
      {0.3, ParametricDist{Uniform{0.2, 1.0}}, quad(2.0)},
      {0.2, ParametricDist{Triangular{-0.4, 0.1}}, quad(1.0)},
      {0.2, ParametricDist{Triangular{0.4, 0.1}}, quad(1.0)},
  }));
  // Mirrored pair away from zero (center 0.7).
  battery.push_back(Population({
      {0.5, ParametricDist{Uniform{-0.1, 0.5}}, quad(1.0)},
      {0.5, ParametricDist{Uniform{0.9, 1.5}}, quad(1.0)},
  }));
  return battery;
}

}  // namespace

bool doubly_symmetric_probe(
    const std::function<double(const Population&)>& statistic, double tol) {
  for (const Population& pop : doubly_symmetric_battery()) {
    const auto witness = find_symmetry_witness(pop);
    if (!witness) throw std::logic_error("battery population lacks a witness");
    if (std::abs(statistic(pop) - witness->center) > tol) return false;
  }
  return true;
}

bool doubly_symmetric_probe(const BenchmarkSpec& spec, double tol) {
  return doubly_symmetric_probe(
      [&spec](const Population& pop) {
        if (spec.kind == BenchmarkKind::WeightedMean && spec.weights.empty()) {
          BenchmarkSpec with_weights = spec;
          // Prop-6 style weights at a reference target off the center.
          with_weights.weights =
              weighted_mean_weights(pop, pop.center() + 1.0);
          return evaluate(with_weights, pop);
        }
        return evaluate(spec, pop);
      },
      tol);
}

Section4Report section4_example() {
  const CostModel unit_fixed(1.0, ZeroCost{});
  const Population pop({
      {0.7, ParametricDist{Uniform{-1.0, 0.4}}, unit_fixed},
      {0.2, ParametricDist{Uniform{0.4, 0.8}}, unit_fixed},
      {0.1, ParametricDist{Uniform{0.8, 1.0}}, unit_fixed},
  });

  Section4Report report;
  double weighted = 0.0;
  for (const Subpopulation& s : pop.subpops()) {
    report.sub_medians.push_back(median(s.dist));
    weighted += s.mu * report.sub_medians.back();
  }
  report.median_of_medians =
      evaluate(BenchmarkSpec::median_of_medians(), pop);
  report.mean_of_medians = evaluate(BenchmarkSpec::mean_of_medians(), pop);
  report.mass_weighted_mean_of_medians = weighted;

  const PriceDist pooled = ParametricDist{Uniform{-1.0, 1.0}};
  for (const BenchmarkSpec& spec : symmetric_benchmark_library())
    report.symmetric_values.emplace_back(spec.label(), evaluate(spec, pooled));

  report.note =
      "unweighted mean of medians is 0.4 (mass-weighted: 0.0), not 0.6; "
      "only the median of the medians equals 0.6";
  return report;
}

}  // namespace benchcost
