#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "benchcost/attack.hpp"

using namespace benchcost;

namespace {

const PriceDist kTri = ParametricDist{Triangular{0, 1}};
const CostModel kQuadK8(8, QuadraticCost{1});
const CostModel kQuadK0(0, QuadraticCost{1});

// Independent 1-D search over P * average_cost(delta), delta >= P.
double grid_mean_cost(const CostModel& m, double P) {
  double best = kInfinitePrice;
  for (int i = 0; i <= 1000000; ++i) {
    const double d = P + 10.0 * i / 1000000.0;
    best = std::min(best, P * m.average_cost(d));
  }
  return best;
}

}  // namespace

TEST_CASE("mean attack: full shift when delta_min <= P") {
  const UniformShiftPlan p1 = mean_attack(kQuadK0, 1.0);
  CHECK(p1.delta == doctest::Approx(1.0));
  CHECK(p1.mass == doctest::Approx(1.0));
  CHECK(p1.cost == doctest::Approx(1.0));
  CHECK(p1.selector == MassSelector::AllMass);

  const UniformShiftPlan p3 = mean_attack(kQuadK8, 3.0);  // delta_min = 2*sqrt2 < 3
  CHECK(p3.delta == doctest::Approx(3.0));
  CHECK(p3.mass == doctest::Approx(1.0));
  CHECK(p3.cost == doctest::Approx(17.0));
}

TEST_CASE("mean attack: top slice when delta_min > P") {
  const UniformShiftPlan p = mean_attack(kQuadK8, 1.0);
  CHECK(p.delta == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
  CHECK(p.mass == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-9));
  CHECK(p.cost == doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-9));
  CHECK(p.cost == doctest::Approx(grid_mean_cost(kQuadK8, 1.0)).epsilon(1e-6));
  CHECK(p.cost == doctest::Approx(p.mass * (8.0 + p.delta * p.delta)));
}

TEST_CASE("mean attack: upper-half shift at delta_min = 2P") {
  const CostModel m(4, QuadraticCost{1});  // delta_min = 2
  const UniformShiftPlan p = mean_attack(m, 1.0);
  CHECK(p.delta == doctest::Approx(2.0));
  CHECK(p.mass == doctest::Approx(0.5));
  CHECK(p.selector == MassSelector::UpperHalf);
  CHECK(p.cost == doctest::Approx(4.0));
  CHECK(p.cost == doctest::Approx(grid_mean_cost(m, 1.0)).epsilon(1e-6));
}

TEST_CASE("mean attack: zero variable cost has unattained infimum") {
  const UniformShiftPlan p = mean_attack(CostModel(1, ZeroCost{}), 1.0);
  CHECK_FALSE(p.attained);
  CHECK(p.cost == doctest::Approx(0.0));
  CHECK_THROWS(mean_attack(kQuadK0, 0.0));
}

TEST_CASE("mean attack reflection") {
  const UniformShiftPlan pos = mean_attack(kQuadK8, 1.0);
  const UniformShiftPlan neg = mean_attack(kQuadK8, -1.0);
  CHECK(neg.cost == doctest::Approx(pos.cost));
  CHECK(neg.delta == doctest::Approx(-pos.delta));
  CHECK(neg.mass == doctest::Approx(pos.mass));
}

TEST_CASE("median attack cost") {
  CHECK(median_attack_cost(1.0, ParametricDist{Uniform{-1, 1}}, 0.5).cost ==
        doctest::Approx(0.25));
  CHECK(median_attack_cost(1.0, kTri, 0.5).cost == doctest::Approx(0.375));
  CHECK(median_attack_cost(2.0, ParametricDist{Uniform{-1, 1}}, 0.5).cost ==
        doctest::Approx(0.5));
  // Target at or below the median is free.
  CHECK(median_attack_cost(1.0, kTri, -0.2).cost == doctest::Approx(0.0));
  CHECK(median_attack_cost(1.0, kTri, -0.2).moved_mass == doctest::Approx(0.0));
}

TEST_CASE("median symmetric construction on the triangular density") {
  const TransportPlan plan = median_symmetric_construction(kTri, 0.5, 1.0);
  CHECK(plan.moved_mass == doctest::Approx(0.375).epsilon(1e-6));
  CHECK(plan.cost == doctest::Approx(0.375).epsilon(1e-6));
  CHECK(is_symmetric(PriceDist{plan.induced}, 0.5, 1e-6));
  CHECK(median(PriceDist{plan.induced}) == doctest::Approx(0.5).epsilon(1e-6));

  // Induced density equals (f(x) + f(x - 2P)) / 2 pointwise.
  const GridDist& g = plan.induced;
  const auto f = [](double x) {
    return std::abs(x) < 1.0 ? 1.0 - std::abs(x) : 0.0;
  };
  for (int i = 0; i < g.cells(); i += 7) {
    const double x = g.lo() + (i + 0.5) * g.dx();
    CHECK(g.density()[i] ==
          doctest::Approx(0.5 * (f(x) + f(x - 1.0))).epsilon(1e-6));
  }
}

TEST_CASE("median symmetric construction moved mass identity") {
  const PriceDist tg = ParametricDist{TruncatedGaussian{0.5, 2}};
  const TransportPlan plan = median_symmetric_construction(tg, 0.3);
  CHECK(plan.moved_mass ==
        doctest::Approx(cdf(tg, 0.3) - 0.5).epsilon(1e-6));
  CHECK(is_symmetric(PriceDist{plan.induced}, 0.3, 1e-6));
}

TEST_CASE("median symmetric construction rejects weak peaks") {
  CHECK_THROWS(
      median_symmetric_construction(ParametricDist{Uniform{-1, 1}}, 0.5));
  CHECK_THROWS(median_symmetric_construction(kTri, 1.5));  // outside support
}

TEST_CASE("trimmed attack closed forms") {
  const UniformShiftPlan p = trimmed_attack(kQuadK8, 1.0 / 6.0, 1.0);
  CHECK(p.delta == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(p.mass == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(p.cost == doctest::Approx(6.0).epsilon(1e-9));

  // tau = 0 reduces exactly to the mean attack.
  const UniformShiftPlan zero = trimmed_attack(kQuadK8, 0.0, 1.0);
  const UniformShiftPlan mean_plan = mean_attack(kQuadK8, 1.0);
  CHECK(zero.delta == mean_plan.delta);
  CHECK(zero.cost == mean_plan.cost);

  // k=2: interior stationary shift solves d^3 + 4 d^2 - 8 = 0.
  const CostModel k2(2, QuadraticCost{1});
  const UniformShiftPlan q = trimmed_attack(k2, 0.1, 1.0);
  CHECK(q.delta == doctest::Approx(1.2361).epsilon(1e-4));
  const double d = q.delta;
  CHECK(d * d * d + 4.0 * d * d - 8.0 == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(q.cost == doctest::Approx(2.636).epsilon(1e-3));
}

TEST_CASE("trimmed attack guards") {
  CHECK_THROWS(trimmed_attack(kQuadK8, 0.5, 1.0));
  CHECK_THROWS(trimmed_attack(kQuadK8, 0.1, -1.0));
  CHECK_THROWS(trimmed_attack(kQuadK8, 0.7, 1.0));
}

TEST_CASE("optimal tau") {
  CHECK(optimal_tau(kQuadK8, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(optimal_tau(CostModel(4, QuadraticCost{1}), 1.0) == 0.0);
  CHECK(optimal_tau(CostModel(16, QuadraticCost{1}), 1.0) ==
        doctest::Approx(0.3).epsilon(1e-12));
  CHECK_THROWS(optimal_tau(kQuadK0, 1.0));                       // delta_min < P
  CHECK_THROWS(optimal_tau(CostModel(2, QuadraticCost{1}), 1.0));  // in (P, 2P)
}

TEST_CASE("attack cost curve shapes") {
  const std::vector<double> grid = {0.0, 0.1, 0.2, 0.3, 0.4};
  const auto low = attack_cost_curve(CostModel(2, QuadraticCost{1}), 1.0, grid);
  CHECK(low.front().cost == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
  for (size_t i = 1; i < low.size(); ++i) CHECK(low[i].cost < low[i - 1].cost);

  const auto high = attack_cost_curve(kQuadK8, 1.0, {0.0, 1.0 / 6.0, 0.3});
  CHECK(high[0].cost == doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-6));
  CHECK(high[1].cost == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(high[2].cost < 6.0);

  const auto edge =
      attack_cost_curve(CostModel(4, QuadraticCost{1}), 1.0, grid);
  for (size_t i = 1; i < edge.size(); ++i)
    CHECK(edge[i].cost <= edge[0].cost + 1e-12);
}

TEST_CASE("induced final distributions and the symmetry certificate") {
  // Full shift: exact translate of the source.
  const UniformShiftPlan full = mean_attack(kQuadK0, 1.0);
  const PriceDist f1 = induced_final(kTri, full);
  CHECK(symmetry_certificate(f1, 1.0, 1e-6));
  CHECK(mean(f1) == doctest::Approx(1.0).epsilon(1e-9));

  // Upper-half shift at delta_min = 2P.
  const UniformShiftPlan half = mean_attack(CostModel(4, QuadraticCost{1}), 1.0);
  const PriceDist f2 = induced_final(kTri, half);
  CHECK(symmetry_certificate(f2, 1.0, 1e-6));

  // Degenerate source splits into atoms.
  const UniformShiftPlan top = mean_attack(kQuadK8, 1.0);
  const PriceDist f3 = induced_final(ParametricDist{Degenerate{0}}, top);
  CHECK(evaluate(BenchmarkSpec::mean(), f3) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::holds_alternative<AtomDist>(f3));

  // An off-center final distribution fails the certificate.
  CHECK_FALSE(symmetry_certificate(f1, 0.9, 1e-6));
}

TEST_CASE("trimmed plan feasibility on its induced distribution") {
  for (double tau : {0.1, 1.0 / 6.0, 0.3}) {
    const UniformShiftPlan p = trimmed_attack(kQuadK8, tau, 1.0);
    const PriceDist fin = induced_final(ParametricDist{Degenerate{0}}, p);
    CHECK(evaluate(BenchmarkSpec::trimmed(tau), fin) ==
          doctest::Approx(1.0).epsilon(1e-6));
  }
}
