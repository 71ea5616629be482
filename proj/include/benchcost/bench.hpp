#pragma once

#include <functional>
#include <string>
#include <vector>

#include "benchcost/dist.hpp"

namespace benchcost {

enum class BenchmarkKind {
  Mean,
  Median,
  TrimmedMean,
  WeightedMean,      // population only
  MedianOfMedians,   // population only
  MeanOfMedians,     // population only
};

struct BenchmarkSpec {
  BenchmarkKind kind = BenchmarkKind::Mean;
  double tau = 0.0;             // TrimmedMean only, in [0, 0.5]
  std::vector<double> weights;  // WeightedMean only, one per subpopulation

  static BenchmarkSpec mean() { return {BenchmarkKind::Mean}; }
  static BenchmarkSpec median() { return {BenchmarkKind::Median}; }
  static BenchmarkSpec trimmed(double tau) {
    return {BenchmarkKind::TrimmedMean, tau};
  }
  static BenchmarkSpec median_of_medians() {
    return {BenchmarkKind::MedianOfMedians};
  }
  static BenchmarkSpec mean_of_medians() {
    return {BenchmarkKind::MeanOfMedians};
  }

  bool population_only() const {
    return kind == BenchmarkKind::WeightedMean ||
           kind == BenchmarkKind::MedianOfMedians ||
           kind == BenchmarkKind::MeanOfMedians;
  }
  std::string label() const;
};

// Benchmark value on a single distribution. TrimmedMean(0) reproduces the
// mean exactly and TrimmedMean(0.5) the median; interior taus trim
// fractionally at the quantile boundaries. Rejects population-only kinds.
double evaluate(const BenchmarkSpec& spec, const PriceDist& dist);

// Evaluates the statistic on a deterministic battery of symmetric
// distributions (parametric families at several centers/scales plus
// symmetric two- and three-atom cases); true iff every value equals the
// battery center within tol.
bool symmetric_benchmark_probe(
    const std::function<double(const PriceDist&)>& statistic, double tol);
bool symmetric_benchmark_probe(const BenchmarkSpec& spec, double tol = 1e-9);

// The symmetric single-distribution benchmarks this library ships; used by
// the symmetry certificates in the attack module.
std::vector<BenchmarkSpec> symmetric_benchmark_library();

}  // namespace benchcost
