#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "benchcost/oracle.hpp"

using namespace benchcost;

namespace {

const PriceDist kDeg = ParametricDist{Degenerate{0}};
const PriceDist kUni = ParametricDist{Uniform{-1, 1}};
const PriceDist kTri = ParametricDist{Triangular{0, 1}};
const CostModel kQuadK8(8, QuadraticCost{1});

}  // namespace

TEST_CASE("oracle reproduces the top-slice mean attack") {
  const DiscreteManipulation r =
      min_cost_attack(kDeg, kQuadK8, BenchmarkSpec::mean(), 1.0);
  REQUIRE(r.feasible);
  CHECK(r.cost == doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-3));
  CHECK(r.achieved == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.delta == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-2));
}

TEST_CASE("oracle median family is exact on the uniform") {
  const DiscreteManipulation r = min_cost_attack(
      kUni, CostModel(1, ZeroCost{}), BenchmarkSpec::median(), 0.5);
  REQUIRE(r.feasible);
  CHECK(r.family == "median_combinatorial");
  // F(0.5) - 1/2 = 0.25: exactly 500 of 2000 atoms move.
  CHECK(r.moved_mass == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(r.cost == doctest::Approx(0.25).epsilon(5e-4));
  // Every moved atom lands exactly on the target.
  int moved = 0;
  for (size_t i = 0; i < r.source.size(); ++i)
    if (r.dest[i] != r.source[i]) {
      ++moved;
      CHECK(r.dest[i] == 0.5);
    }
  CHECK(moved == 500);
}

TEST_CASE("oracle reproduces the trimmed attack") {
  const DiscreteManipulation r = min_cost_attack(
      kDeg, kQuadK8, BenchmarkSpec::trimmed(1.0 / 6.0), 1.0);
  REQUIRE(r.feasible);
  CHECK(r.cost == doctest::Approx(6.0).epsilon(1e-3));
  CHECK(r.achieved == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("oracle cost identity and mass conservation") {
  const DiscreteManipulation r =
      min_cost_attack(kTri, kQuadK8, BenchmarkSpec::mean(), 1.5);
  REQUIRE(r.feasible);
  REQUIRE(r.source.size() == r.dest.size());
  double recomputed = 0.0;
  for (size_t i = 0; i < r.source.size(); ++i) {
    if (r.dest[i] == r.source[i]) continue;
    recomputed += (kQuadK8.fixed() +
                   kQuadK8.variable_cost(r.dest[i] - r.source[i])) /
                  r.source.size();
  }
  CHECK(recomputed == doctest::Approx(r.cost).epsilon(1e-12));
}

TEST_CASE("oracle is deterministic across thread counts") {
  SearchConfig one;
  one.threads = 1;
  SearchConfig four;
  four.threads = 4;
  for (const BenchmarkSpec& spec :
       {BenchmarkSpec::mean(), BenchmarkSpec::trimmed(0.2)}) {
    const DiscreteManipulation a =
        min_cost_attack(kTri, kQuadK8, spec, 1.2, one);
    const DiscreteManipulation b =
        min_cost_attack(kTri, kQuadK8, spec, 1.2, four);
    CHECK(a.cost == b.cost);
    CHECK(a.delta == b.delta);
    CHECK(a.family == b.family);
    CHECK(a.dest == b.dest);
  }
}

TEST_CASE("oracle never beats a proven closed form by more than resolution") {
  const DiscreteManipulation r =
      min_cost_attack(kDeg, kQuadK8, BenchmarkSpec::mean(), 1.0);
  CHECK(r.cost >= 4.0 * std::sqrt(2.0) - 1e-3);
}

TEST_CASE("oracle trivial and guard cases") {
  SearchConfig cfg;
  const DiscreteManipulation r =
      min_cost_attack(kTri, kQuadK8, BenchmarkSpec::mean(), 0.0, cfg);
  CHECK(r.feasible);
  CHECK(r.cost == 0.0);
  CHECK(r.family == "none");

  SearchConfig bad;
  bad.n_atoms = 1;
  CHECK_THROWS(min_cost_attack(kTri, kQuadK8, BenchmarkSpec::mean(), 1.0, bad));
  CHECK_THROWS(min_cost_attack(kTri, kQuadK8,
                               BenchmarkSpec::median_of_medians(), 1.0));
}

TEST_CASE("resolution consistency") {
  SearchConfig coarse;
  coarse.n_atoms = 1000;
  SearchConfig fine;
  fine.n_atoms = 2000;
  const double a =
      min_cost_attack(kTri, kQuadK8, BenchmarkSpec::mean(), 1.0, coarse).cost;
  const double b =
      min_cost_attack(kTri, kQuadK8, BenchmarkSpec::mean(), 1.0, fine).cost;
  CHECK(std::abs(a - b) <= 2e-2);
}

TEST_CASE("verify_proposition: trimmed-mean design point") {
  VerifyScenario sc;
  sc.id = "deg-k8";
  sc.dist = kDeg;
  sc.cost = kQuadK8;
  sc.target = 1.0;
  const PropositionReport r = verify_proposition("P4", sc);
  CHECK(r.status == "pass");
  CHECK(r.closed_form_cost == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(std::abs(r.oracle_cost - 6.0) <= 1e-3);
  CHECK(r.symmetry_pass);
}

TEST_CASE("verify_proposition: dominance of the untrimmed mean") {
  VerifyScenario sc;
  sc.id = "deg-k2";
  sc.dist = kDeg;
  sc.cost = CostModel(2, QuadraticCost{1});
  sc.target = 1.0;
  const PropositionReport r = verify_proposition("P5", sc);
  CHECK(r.status == "pass");
  CHECK(r.closed_form_cost == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("verify_proposition: median construction") {
  VerifyScenario sc;
  sc.id = "tri-k1";
  sc.dist = kTri;
  sc.cost = CostModel(1, ZeroCost{});
  sc.target = 0.5;
  const PropositionReport r = verify_proposition("P2_median", sc);
  CHECK(r.status == "pass");
  CHECK(r.closed_form_cost == doctest::Approx(0.375).epsilon(1e-9));
  CHECK(r.symmetry_pass);
}

TEST_CASE("verify_proposition: unmet hypotheses are reported, not failed") {
  VerifyScenario sc;
  sc.id = "bad";
  sc.dist = kDeg;
  sc.cost = kQuadK8;  // k != 0
  sc.target = 1.0;
  CHECK(verify_proposition("P2_mean", sc).status == "hypotheses_unmet");
  sc.cost = CostModel(2, QuadraticCost{1});  // delta_min in (P, 2P)
  CHECK(verify_proposition("P4", sc).status == "hypotheses_unmet");
  CHECK_THROWS(verify_proposition("P99", sc));
}
