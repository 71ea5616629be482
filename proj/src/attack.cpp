#include "benchcost/attack.hpp"

#include <cmath>
#include <stdexcept>

namespace benchcost {
namespace {

// Sign change of the trimmed-mean objective derivative on (0, delta_min).
double trimmed_foc(const CostModel& m, double tau, double P, double delta) {
  const double cb = m.average_cost(delta);
  const double cp = m.marginal_cost(delta);
  return -P * (1.0 - 2.0 * tau) * (cb - cp) / delta + tau * cp;
}

PriceDist reflect(const PriceDist& d) {
  return visit_dist(d, [](const auto& dd) -> PriceDist {
    using T = std::decay_t<decltype(dd)>;
    if constexpr (std::is_same_v<T, Degenerate>)
      return ParametricDist{Degenerate{-dd.p}};
    else if constexpr (std::is_same_v<T, Uniform>)
      return ParametricDist{Uniform{-dd.b, -dd.a}};
    else if constexpr (std::is_same_v<T, Triangular>)
      return ParametricDist{Triangular{-dd.center, dd.halfwidth}};
    else if constexpr (std::is_same_v<T, TruncatedGaussian>)
      return ParametricDist{dd};
    else if constexpr (std::is_same_v<T, GridDist>)
      return GridDist(-dd.hi(), -dd.lo(), dd.density().reverse().eval());
    else {
      std::vector<Atom> atoms = dd.atoms();
      for (Atom& a : atoms) a.pos = -a.pos;
      return AtomDist(std::move(atoms));
    }
  });
}

}  // namespace

std::string to_string(MassSelector s) {
  switch (s) {
    case MassSelector::AllMass: return "all_mass";
    case MassSelector::UpperHalf: return "upper_half";
    case MassSelector::TopOfDistribution: return "top";
  }
  return "?";
}

UniformShiftPlan mean_attack(const CostModel& m, double P) {
  if (P == 0.0)
    throw std::invalid_argument("mean_attack: target 0 needs no manipulation");
  const double sign = P < 0.0 ? -1.0 : 1.0;
  const double p = std::abs(P);

  UniformShiftPlan plan;
  plan.achieved = P;
  if (m.zero_variable()) {
    // P * k / delta -> 0 as delta grows: the infimum is not attained.
    plan.delta = sign * kInfinitePrice;
    plan.mass = 0.0;
    plan.cost = 0.0;
    plan.attained = false;
    plan.note = "infimum 0, unattained (zero variable cost)";
    return plan;
  }
  if (!m.strictly_convex())
    throw std::invalid_argument("mean_attack: requires strictly convex cost");

  const double dm = m.delta_min();
  if (dm <= p) {
    plan.delta = p;
    plan.mass = 1.0;
    plan.selector = MassSelector::AllMass;
    plan.cost = m.fixed() + m.variable_cost(p);
  } else if (std::abs(dm - 2.0 * p) <= 1e-12 * std::max(1.0, 2.0 * p)) {
    plan.delta = dm;
    plan.mass = 0.5;
    plan.selector = MassSelector::UpperHalf;
    plan.cost = p * m.average_cost(dm);
  } else {
    plan.delta = dm;
    plan.mass = p / dm;
    plan.selector = MassSelector::TopOfDistribution;
    plan.cost = p * m.average_cost(dm);
  }
  plan.delta *= sign;
  return plan;
}

MedianAttack median_attack_cost(double k, const PriceDist& F, double P) {
  if (!(k > 0.0))
    throw std::invalid_argument("median_attack_cost: requires k > 0");
  if (P <= median(F)) return {0.0, 0.0};  // trivial plan
  const double moved = cdf(F, P) - 0.5;
  return {k * moved, moved};
}

TransportPlan median_symmetric_construction(const PriceDist& F, double P,
                                            double k, int grid_cells) {
  if (!strictly_single_peaked(F))
    throw std::invalid_argument(
        "median_symmetric_construction: requires a strictly single-peaked "
        "density (weakly single-peaked inputs make the retained mass share "
        "degenerate)");
  if (!is_symmetric(F, 0.0, 1e-9))
    throw std::invalid_argument(
        "median_symmetric_construction: F must be symmetric around 0");
  const auto [flo, fhi] = support(F);
  if (!(P > 0.0) || !(P < fhi))
    throw std::invalid_argument(
        "median_symmetric_construction: P must lie in (0, sup support)");

  const double lo = flo, hi = fhi + 2.0 * P;
  const int n = grid_cells;
  const double dx = (hi - lo) / n;
  ArrayXd induced(n), alpha(n);
  alpha.setOnes();

  const auto f = [&](double x) {
    return (x < flo || x > fhi) ? 0.0 : pdf(F, x);
  };

  // Pass 1: retained mass below P and the total mass spread over [P, inf).
  double moved_num = 0.0, spread_den = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (i + 0.5) * dx;
    if (x < P) {
      const double fx = f(x);
      if (fx > 0.0) {
        const double a = (fx + f(x - 2.0 * P)) / (2.0 * fx);
        alpha[i] = a;
        moved_num += (1.0 - a) * fx * dx;
      }
    } else {
      spread_den += 0.5 * (f(x - 2.0 * P) - f(x)) * dx;
    }
  }
  if (!(spread_den > 0.0))
    throw std::invalid_argument(
        "median_symmetric_construction: no mass to spread above P");

  // Pass 2: induced final density. Below P it is alpha(x) f(x); above, the
  // original density plus the transported mass.
  for (int i = 0; i < n; ++i) {
    const double x = lo + (i + 0.5) * dx;
    if (x < P) {
      induced[i] = alpha[i] * f(x);
    } else {
      const double gt = 0.5 * (f(x) + f(x - 2.0 * P));
      induced[i] = f(x) + moved_num * (gt - f(x)) / spread_den;
    }
  }
  // Midpoint quadrature leaves O(dx^2) residue at each density kink.
  const double total = induced.sum() * dx;
  if (std::abs(total - 1.0) > 1e-6)
    throw std::runtime_error(
        "median_symmetric_construction: induced mass deviates from 1");

  return TransportPlan{F,
                       GridDist::from_density(lo, hi, std::move(induced)),
                       std::move(alpha),
                       P,
                       moved_num,
                       k * moved_num};
}

UniformShiftPlan trimmed_attack(const CostModel& m, double tau, double P) {
  if (!(P > 0.0)) throw std::invalid_argument("trimmed_attack: requires P > 0");
  if (tau == 0.5)
    throw std::invalid_argument(
        "trimmed_attack: tau = 0.5 is the median; use median_attack_cost");
  if (tau < 0.0 || tau > 0.5)
    throw std::invalid_argument("trimmed_attack: tau outside [0, 0.5)");
  if (tau == 0.0) return mean_attack(m, P);
  if (!m.strictly_convex())
    throw std::invalid_argument("trimmed_attack: requires strictly convex cost");

  const double dm = m.delta_min();
  double delta_star = 0.0;
  if (dm > 0.0) {
    double lo = 1e-9 * dm, hi = dm;
    if (trimmed_foc(m, tau, P, lo) >= 0.0) {
      delta_star = lo;
    } else {
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (trimmed_foc(m, tau, P, mid) < 0.0 ? lo : hi) = mid;
      }
      delta_star = 0.5 * (lo + hi);
    }
  }

  UniformShiftPlan plan;
  plan.delta = std::max(P, delta_star);
  plan.mass = tau + (1.0 - 2.0 * tau) * P / plan.delta;
  plan.selector = MassSelector::TopOfDistribution;
  plan.cost = plan.mass * (m.fixed() + m.variable_cost(plan.delta));
  plan.achieved = P;
  if (!(plan.mass > tau) || plan.mass > 1.0 - tau + 1e-12)
    throw std::logic_error("trimmed_attack: moved mass outside (tau, 1-tau]");
  return plan;
}

double optimal_tau(const CostModel& m, double P) {
  if (!(P > 0.0)) throw std::invalid_argument("optimal_tau: requires P > 0");
  if (!m.strictly_convex())
    throw std::invalid_argument("optimal_tau: requires strictly convex cost");
  const double dm = m.delta_min();
  const double two_p = 2.0 * P;
  if (std::abs(dm - two_p) <= 1e-9 * std::max(1.0, two_p)) return 0.0;
  if (dm < two_p) {
    if (dm <= P)
      throw std::domain_error(
          "optimal_tau: delta_min <= P (full-shift regime P3, the untrimmed "
          "mean is optimal)");
    throw std::domain_error(
        "optimal_tau: delta_min in (P, 2P) (regime P5, the untrimmed mean "
        "dominates every trimmed mean)");
  }
  const double tau_star =
      0.5 * (1.0 - m.marginal_cost(two_p) / m.average_cost(two_p));
  // The optimal trim must make the interior shift exactly 2P.
  const UniformShiftPlan check = trimmed_attack(m, tau_star, P);
  if (std::abs(check.delta - two_p) > 1e-6 * std::max(1.0, two_p) ||
      std::abs(check.mass - 0.5) > 1e-6)
    throw std::logic_error("optimal_tau: postcondition delta = 2P failed");
  return tau_star;
}

std::vector<CostCurveRow> attack_cost_curve(const CostModel& m, double P,
                                            const std::vector<double>& taus) {
  std::vector<CostCurveRow> rows;
  rows.reserve(taus.size());
  for (double tau : taus) {
    const UniformShiftPlan plan =
        tau == 0.0 ? mean_attack(m, P) : trimmed_attack(m, tau, P);
    rows.push_back({tau, plan.delta, plan.mass, plan.cost});
  }
  return rows;
}

PriceDist induced_final(const PriceDist& F, const UniformShiftPlan& plan,
                        int grid_cells) {
  if (!plan.attained)
    throw std::invalid_argument("induced_final: plan is a diagnostic infimum");
  if (plan.delta < 0.0) {
    UniformShiftPlan mirrored = plan;
    mirrored.delta = -plan.delta;
    return reflect(induced_final(reflect(F), mirrored, grid_cells));
  }
  const double delta = plan.delta;
  const double threshold = 1.0 - plan.mass;

  if (plan.mass >= 1.0) return shifted(F, delta);  // pure shift, exact
  if (const auto* par = std::get_if<ParametricDist>(&F)) {
    if (const auto* deg = std::get_if<Degenerate>(par)) {
      return AtomDist({{deg->p, 1.0 - plan.mass}, {deg->p + delta, plan.mass}});
    }
  }

  const auto [flo, fhi] = support(F);
  const double lo = flo, hi = fhi + delta;
  const int n = grid_cells;
  const double dx = (hi - lo) / n;
  ArrayXd rho(n);
  for (int i = 0; i < n; ++i) {
    const double a = lo + i * dx, b = a + dx;
    const double kept =
        std::max(0.0, std::min(cdf(F, b), threshold) -
                          std::min(cdf(F, a), threshold));
    const double arrived =
        std::max(0.0, cdf(F, b - delta) -
                          std::max(cdf(F, a - delta), threshold));
    rho[i] = (kept + arrived) / dx;
  }
  return GridDist::from_density(lo, hi, std::move(rho));
}

bool symmetry_certificate(const PriceDist& final_dist, double P, double tol) {
  if (!is_symmetric(final_dist, P, tol)) return false;
  for (const BenchmarkSpec& spec : symmetric_benchmark_library())
    if (std::abs(evaluate(spec, final_dist) - P) > tol) return false;
  return true;
}

}  // namespace benchcost
