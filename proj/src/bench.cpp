#include "benchcost/bench.hpp"

#include <cmath>
#include <stdexcept>

namespace benchcost {
namespace {

// Trimmed mean of an atom list via fractional inclusion: an atom whose
// cumulative-mass interval straddles a trim boundary contributes only its
// in-window share.
double trimmed_mean_atoms(const AtomDist& d, double tau) {
  const double lo = tau, hi = 1.0 - tau;
  double c = 0.0, num = 0.0;
  for (const Atom& a : d.atoms()) {
    const double c0 = c, c1 = c + a.mass;
    const double w = std::max(0.0, std::min(c1, hi) - std::max(c0, lo));
    num += w * a.pos;
    c = c1;
  }
  return num / (1.0 - 2.0 * tau);
}

// Trimmed mean of a grid by exact integration of the piecewise-constant
// density between the tau and 1-tau quantiles.
double trimmed_mean_grid(const GridDist& d, double tau) {
  const double a = d.quantile(tau), b = d.quantile(1.0 - tau);
  const double dx = d.dx();
  double num = 0.0;
  for (int i = 0; i < d.cells(); ++i) {
    const double cl = d.lo() + i * dx, cr = cl + dx;
    const double l = std::max(cl, a), r = std::min(cr, b);
    if (r <= l) continue;
    // integral of x * rho over [l, r]
    num += d.density()[i] * 0.5 * (r * r - l * l);
  }
  return num / (1.0 - 2.0 * tau);
}

// Trimmed mean of a continuous family via the quantile integral
// (1/(1-2tau)) * int_tau^{1-tau} Q(u) du   (composite Simpson).
double trimmed_mean_quantile(const PriceDist& d, double tau) {
  const int n = 4096;  // even
  const double a = tau, b = 1.0 - tau, h = (b - a) / n;
  double s = quantile(d, a) + quantile(d, b);
  for (int i = 1; i < n; ++i)
    s += (i % 2 ? 4.0 : 2.0) * quantile(d, a + i * h);
  return (s * h / 3.0) / (1.0 - 2.0 * tau);
}

double trimmed_mean(const PriceDist& d, double tau) {
  if (tau == 0.0) return mean(d);
  if (tau >= 0.5) return median(d);
  return visit_dist(d, [&](const auto& dd) -> double {
    using T = std::decay_t<decltype(dd)>;
    if constexpr (std::is_same_v<T, AtomDist>)
      return trimmed_mean_atoms(dd, tau);
    else if constexpr (std::is_same_v<T, GridDist>)
      return trimmed_mean_grid(dd, tau);
    else if constexpr (std::is_same_v<T, Degenerate>)
      return dd.p;
    else
      return trimmed_mean_quantile(d, tau);
  });
}

}  // namespace

std::string BenchmarkSpec::label() const {
  switch (kind) {
    case BenchmarkKind::Mean: return "mean";
    case BenchmarkKind::Median: return "median";
    case BenchmarkKind::TrimmedMean:
      return "trimmed_mean(" + std::to_string(tau) + ")";
    case BenchmarkKind::WeightedMean: return "weighted_mean";
    case BenchmarkKind::MedianOfMedians: return "median_of_medians";
    case BenchmarkKind::MeanOfMedians: return "mean_of_medians";
  }
  return "?";
}

double evaluate(const BenchmarkSpec& spec, const PriceDist& dist) {
  if (spec.population_only())
    throw std::invalid_argument(
        "evaluate: " + spec.label() + " applies to populations only");
  switch (spec.kind) {
    case BenchmarkKind::Mean:
      return mean(dist);
    case BenchmarkKind::Median:
      return median(dist);
    case BenchmarkKind::TrimmedMean:
      if (spec.tau < 0.0 || spec.tau > 0.5)
        throw std::invalid_argument("evaluate: tau outside [0, 0.5]");
      return trimmed_mean(dist, spec.tau);
    default:
      throw std::invalid_argument("evaluate: unsupported kind");
  }
}

bool symmetric_benchmark_probe(
    const std::function<double(const PriceDist&)>& statistic, double tol) {
  struct Case {
    PriceDist dist;
    double center;
  };
  const std::vector<Case> battery = {
      {ParametricDist{Uniform{-1.0, 1.0}}, 0.0},
      {ParametricDist{Uniform{0.5, 3.5}}, 2.0},
      {ParametricDist{Triangular{0.0, 1.0}}, 0.0},
      {ParametricDist{Triangular{-2.0, 0.7}}, -2.0},
      {ParametricDist{TruncatedGaussian{0.5, 2.0}}, 0.0},
      {ParametricDist{TruncatedGaussian{1.5, 3.0}}, 0.0},
      {AtomDist({{-1.0, 0.5}, {1.0, 0.5}}), 0.0},
      {AtomDist({{-0.7, 0.5}, {1.3, 0.5}}), 0.3},
      {AtomDist({{-1.0, 0.25}, {0.0, 0.5}, {1.0, 0.25}}), 0.0},
  };
  for (const Case& c : battery)
    if (std::abs(statistic(c.dist) - c.center) > tol) return false;
  return true;
}

bool symmetric_benchmark_probe(const BenchmarkSpec& spec, double tol) {
  return symmetric_benchmark_probe(
      [&spec](const PriceDist& d) { return evaluate(spec, d); }, tol);
}

std::vector<BenchmarkSpec> symmetric_benchmark_library() {
  return {BenchmarkSpec::mean(),         BenchmarkSpec::median(),
          BenchmarkSpec::trimmed(0.1),   BenchmarkSpec::trimmed(0.25),
          BenchmarkSpec::trimmed(1.0 / 3.0), BenchmarkSpec::trimmed(0.5)};
}

}  // namespace benchcost
