#include "benchcost/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace benchcost {
namespace {

constexpr double kMassTol = 1e-12;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

double trunc_gauss_norm(const TruncatedGaussian& g) {
  return normal_cdf(g.halfwidth / g.sigma) - normal_cdf(-g.halfwidth / g.sigma);
}

// ------------------------------- cdf ---------------------------------------

double cdf_impl(const Degenerate& d, double x) { return x >= d.p ? 1.0 : 0.0; }

double cdf_impl(const Uniform& u, double x) {
  if (x <= u.a) return 0.0;
  if (x >= u.b) return 1.0;
  return (x - u.a) / (u.b - u.a);
}

double cdf_impl(const Triangular& t, double x) {
  const double y = (x - t.center) / t.halfwidth;
  if (y <= -1.0) return 0.0;
  if (y >= 1.0) return 1.0;
  if (y <= 0.0) return 0.5 * (1.0 + y) * (1.0 + y);
  return 1.0 - 0.5 * (1.0 - y) * (1.0 - y);
}

double cdf_impl(const TruncatedGaussian& g, double x) {
  if (x <= -g.halfwidth) return 0.0;
  if (x >= g.halfwidth) return 1.0;
  const double z = trunc_gauss_norm(g);
  return (normal_cdf(x / g.sigma) - normal_cdf(-g.halfwidth / g.sigma)) / z;
}

double cdf_impl(const GridDist& d, double x) { return d.cdf(x); }
double cdf_impl(const AtomDist& d, double x) { return d.cdf(x); }

// ----------------------------- quantile ------------------------------------

double quantile_impl(const Degenerate& d, double) { return d.p; }

double quantile_impl(const Uniform& u, double q) {
  return u.a + q * (u.b - u.a);
}

double quantile_impl(const Triangular& t, double q) {
  if (q <= 0.5) return t.center - t.halfwidth * (1.0 - std::sqrt(2.0 * q));
  return t.center + t.halfwidth * (1.0 - std::sqrt(2.0 * (1.0 - q)));
}

double quantile_impl(const TruncatedGaussian& g, double q) {
  if (q <= 0.0) return -g.halfwidth;
  if (q >= 1.0) return g.halfwidth;
  double lo = -g.halfwidth, hi = g.halfwidth;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf_impl(g, mid) < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double quantile_impl(const GridDist& d, double q) { return d.quantile(q); }
double quantile_impl(const AtomDist& d, double q) { return d.quantile(q); }

// ------------------------------- pdf ---------------------------------------

double pdf_any(const Uniform& u, double x) {
  return (x < u.a || x > u.b) ? 0.0 : 1.0 / (u.b - u.a);
}

double pdf_any(const Triangular& t, double x) {
  const double y = std::abs(x - t.center) / t.halfwidth;
  return y >= 1.0 ? 0.0 : (1.0 - y) / t.halfwidth;
}

double pdf_any(const TruncatedGaussian& g, double x) {
  if (std::abs(x) > g.halfwidth) return 0.0;
  return normal_pdf(x / g.sigma) / (g.sigma * trunc_gauss_norm(g));
}

double pdf_any(const GridDist& d, double x) { return d.pdf(x); }

}  // namespace

// ------------------------------ GridDist -----------------------------------

GridDist::GridDist(double lo, double hi, ArrayXd density)
    : lo_(lo), hi_(hi), density_(std::move(density)) {
  const int n = static_cast<int>(density_.size());
  if (n < 2) throw std::invalid_argument("GridDist: need at least 2 cells");
  if (!(hi_ > lo_)) throw std::invalid_argument("GridDist: hi must exceed lo");
  if ((density_ < 0.0).any())
    throw std::invalid_argument("GridDist: negative density");
  dx_ = (hi_ - lo_) / n;
  const double total = density_.sum() * dx_;
  if (std::abs(total - 1.0) > kMassTol)
    throw std::invalid_argument("GridDist: total mass differs from 1");
  cum_.resize(n + 1);
  cum_[0] = 0.0;
  for (int i = 0; i < n; ++i) cum_[i + 1] = cum_[i] + density_[i] * dx_;
  cum_[n] = 1.0;
}

GridDist GridDist::from_density(double lo, double hi, ArrayXd density) {
  const int n = static_cast<int>(density.size());
  if (n < 2) throw std::invalid_argument("GridDist: need at least 2 cells");
  if (!(hi > lo)) throw std::invalid_argument("GridDist: hi must exceed lo");
  const double dx = (hi - lo) / n;
  const double total = density.sum() * dx;
  if (total <= 0.0) throw std::invalid_argument("GridDist: zero total mass");
  return GridDist(lo, hi, density / total);
}

double GridDist::cdf(double x) const {
  if (x <= lo_) return 0.0;
  if (x >= hi_) return 1.0;
  const int i = std::min<int>(cells() - 1,
                              static_cast<int>((x - lo_) / dx_));
  return std::min(1.0, cum_[i] + density_[i] * (x - (lo_ + i * dx_)));
}

double GridDist::quantile(double q) const {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0,1]");
  if (q <= 0.0) return lo_;
  if (q >= 1.0) {
    // Skip any trailing zero-density cells.
    int j = cells();
    while (j > 0 && density_[j - 1] <= 0.0) --j;
    return lo_ + j * dx_;
  }
  // Slack so accumulated rounding cannot skip a CDF plateau that reaches q.
  constexpr double slack = 1e-12;
  auto it = std::lower_bound(cum_.begin(), cum_.end(), q - slack);
  const int b = static_cast<int>(it - cum_.begin());
  if (b == 0) return lo_;
  if (cum_[b] < q) return lo_ + b * dx_;  // boundary attains q within slack
  const int j = b - 1;  // cell where the CDF crosses q
  const double t =
      density_[j] > 0.0 ? (q - cum_[j]) / density_[j] : dx_;
  return lo_ + j * dx_ + std::min(std::max(t, 0.0), dx_);
}

double GridDist::quantile_upper(double q) const {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0,1]");
  if (q >= 1.0) return hi_;
  auto it = std::upper_bound(cum_.begin(), cum_.end(), q);
  const int b = static_cast<int>(it - cum_.begin());
  if (b == 0) return lo_;
  const int j = std::min(b - 1, cells() - 1);
  if (density_[j] <= 0.0) return lo_ + b * dx_;
  return lo_ + j * dx_ + (q - cum_[j]) / density_[j];
}

double GridDist::pdf(double x) const {
  if (x < lo_ || x > hi_) return 0.0;
  // Interpolate between midpoint samples; clamp to edge cells at the ends.
  const double u = (x - lo_) / dx_ - 0.5;
  const int n = cells();
  if (u <= 0.0) return density_[0];
  if (u >= n - 1) return density_[n - 1];
  const int i = static_cast<int>(u);
  const double w = u - i;
  return density_[i] * (1.0 - w) + density_[i + 1] * w;
}

double GridDist::mean() const {
  double s = 0.0;
  for (int i = 0; i < cells(); ++i)
    s += (lo_ + (i + 0.5) * dx_) * density_[i] * dx_;
  return s;
}

GridDist GridDist::shifted(double s) const {
  return GridDist(lo_ + s, hi_ + s, density_);
}

// ------------------------------ AtomDist -----------------------------------

AtomDist::AtomDist(std::vector<Atom> atoms, bool merge_duplicates)
    : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("AtomDist: no atoms");
  for (const Atom& a : atoms_)
    if (!(a.mass > 0.0)) throw std::invalid_argument("AtomDist: mass must be > 0");
  std::stable_sort(atoms_.begin(), atoms_.end(),
                   [](const Atom& a, const Atom& b) { return a.pos < b.pos; });
  if (merge_duplicates) {
    std::vector<Atom> merged;
    for (const Atom& a : atoms_) {
      if (!merged.empty() && a.pos == merged.back().pos)
        merged.back().mass += a.mass;
      else
        merged.push_back(a);
    }
    atoms_ = std::move(merged);
  }
  double total = 0.0;
  for (const Atom& a : atoms_) total += a.mass;
  if (std::abs(total - 1.0) > kMassTol)
    throw std::invalid_argument("AtomDist: total mass differs from 1");
  cum_.resize(atoms_.size());
  double c = 0.0;
  for (size_t i = 0; i < atoms_.size(); ++i) {
    c += atoms_[i].mass;
    cum_[i] = c;
  }
  cum_.back() = 1.0;
}

double AtomDist::cdf(double x) const {
  // Right-continuous: mass of atoms at positions <= x.
  size_t i = 0;
  double c = 0.0;
  while (i < atoms_.size() && atoms_[i].pos <= x) c = cum_[i++];
  return c;
}

double AtomDist::quantile(double q) const {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0,1]");
  const double target = q - 1e-12;
  for (size_t i = 0; i < atoms_.size(); ++i)
    if (cum_[i] >= target) return atoms_[i].pos;
  return atoms_.back().pos;
}

double AtomDist::quantile_upper(double q) const {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0,1]");
  const double target = q + 1e-12;
  for (size_t i = 0; i < atoms_.size(); ++i)
    if (cum_[i] > target) return atoms_[i].pos;
  return atoms_.back().pos;
}

double AtomDist::mean() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.pos * a.mass;
  return s;
}

AtomDist AtomDist::shifted(double s) const {
  std::vector<Atom> moved = atoms_;
  for (Atom& a : moved) a.pos += s;
  return AtomDist(std::move(moved), false);
}

// ---------------------------- free functions --------------------------------

double cdf(const PriceDist& d, double x) {
  return visit_dist(d, [x](const auto& dd) { return cdf_impl(dd, x); });
}

double quantile(const PriceDist& d, double q) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0,1]");
  return visit_dist(d, [q](const auto& dd) { return quantile_impl(dd, q); });
}

double quantile_upper(const PriceDist& d, double q) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0,1]");
  return visit_dist(d, [q](const auto& dd) -> double {
    using T = std::decay_t<decltype(dd)>;
    if constexpr (std::is_same_v<T, GridDist> || std::is_same_v<T, AtomDist>)
      return dd.quantile_upper(q);
    else
      return quantile_impl(dd, q);  // continuous families: unique quantile
  });
}

double pdf(const PriceDist& d, double x) {
  return visit_dist(d, [x](const auto& dd) -> double {
    using T = std::decay_t<decltype(dd)>;
    if constexpr (std::is_same_v<T, Degenerate> || std::is_same_v<T, AtomDist>)
      throw std::invalid_argument("pdf: distribution has no density");
    else
      return pdf_any(dd, x);
  });
}

double mean(const PriceDist& d) {
  return visit_dist(d, [](const auto& dd) -> double {
    using T = std::decay_t<decltype(dd)>;
    if constexpr (std::is_same_v<T, Degenerate>) return dd.p;
    else if constexpr (std::is_same_v<T, Uniform>) return 0.5 * (dd.a + dd.b);
    else if constexpr (std::is_same_v<T, Triangular>) return dd.center;
    else if constexpr (std::is_same_v<T, TruncatedGaussian>) return 0.0;
    else return dd.mean();
  });
}

double median(const PriceDist& d) {
  return 0.5 * (quantile(d, 0.5) + quantile_upper(d, 0.5));
}

std::pair<double, double> support(const PriceDist& d) {
  return visit_dist(d, [](const auto& dd) -> std::pair<double, double> {
    using T = std::decay_t<decltype(dd)>;
    if constexpr (std::is_same_v<T, Degenerate>) return {dd.p, dd.p};
    else if constexpr (std::is_same_v<T, Uniform>) return {dd.a, dd.b};
    else if constexpr (std::is_same_v<T, Triangular>)
      return {dd.center - dd.halfwidth, dd.center + dd.halfwidth};
    else if constexpr (std::is_same_v<T, TruncatedGaussian>)
      return {-dd.halfwidth, dd.halfwidth};
    else if constexpr (std::is_same_v<T, GridDist>) return {dd.lo(), dd.hi()};
    else return {dd.atoms().front().pos, dd.atoms().back().pos};
  });
}

bool is_symmetric(const PriceDist& d, double center, double tol) {
  if (const auto* par = std::get_if<ParametricDist>(&d)) {
    if (const auto* deg = std::get_if<Degenerate>(par))
      return std::abs(deg->p - center) <= tol;
  }
  if (const auto* at = std::get_if<AtomDist>(&d)) {
    // Mirror matching: every atom must have a partner of equal mass at the
    // reflected position.
    const auto& atoms = at->atoms();
    for (const Atom& a : atoms) {
      const double mirror = 2.0 * center - a.pos;
      double matched = 0.0;
      for (const Atom& b : atoms)
        if (std::abs(b.pos - mirror) <= tol) matched += b.mass;
      if (std::abs(matched - a.mass) > tol) return false;
    }
    return true;
  }
  const auto [lo, hi] = support(d);
  const double span = std::max(center - lo, hi - center);
  constexpr int kProbes = 1024;
  for (int j = 0; j < kProbes; ++j) {
    const double off = span * (j + 0.5) / kProbes;
    if (std::abs(pdf(d, center - off) - pdf(d, center + off)) > tol)
      return false;
  }
  return true;
}

bool strictly_single_peaked(const PriceDist& d) {
  return visit_dist(d, [](const auto& dd) -> bool {
    using T = std::decay_t<decltype(dd)>;
    if constexpr (std::is_same_v<T, Triangular> ||
                  std::is_same_v<T, TruncatedGaussian>) {
      return true;
    } else if constexpr (std::is_same_v<T, GridDist>) {
      const ArrayXd& rho = dd.density();
      int peak = 0;
      for (int i = 1; i < rho.size(); ++i)
        if (rho[i] > rho[peak]) peak = i;
      for (int i = 1; i <= peak; ++i)
        if (!(rho[i] > rho[i - 1])) return false;
      for (int i = peak + 1; i < rho.size(); ++i)
        if (!(rho[i] < rho[i - 1])) return false;
      return true;
    } else {
      return false;
    }
  });
}

GridDist to_grid(const PriceDist& d, int n) {
  if (n < 2) throw std::invalid_argument("to_grid: n must be >= 2");
  if (const auto* par = std::get_if<ParametricDist>(&d))
    if (std::holds_alternative<Degenerate>(*par))
      throw std::invalid_argument("to_grid: use to_atoms for Degenerate");
  if (const auto* g = std::get_if<GridDist>(&d)) {
    if (g->cells() == n) return *g;
  }
  const auto [lo, hi] = support(d);
  const double dx = (hi - lo) / n;
  ArrayXd rho(n);
  if (const auto* at = std::get_if<AtomDist>(&d)) {
    rho.setZero();
    for (const Atom& a : at->atoms()) {
      int i = std::min<int>(n - 1, static_cast<int>((a.pos - lo) / dx));
      rho[std::max(0, i)] += a.mass / dx;
    }
  } else {
    for (int i = 0; i < n; ++i) rho[i] = pdf(d, lo + (i + 0.5) * dx);
  }
  return GridDist::from_density(lo, hi, std::move(rho));
}

std::vector<double> equal_mass_positions(const PriceDist& d, int n) {
  if (n < 2) throw std::invalid_argument("to_atoms: n must be >= 2");
  std::vector<double> pos(n);
  for (int i = 0; i < n; ++i) pos[i] = quantile(d, (i + 0.5) / n);
  return pos;
}

AtomDist to_atoms(const PriceDist& d, int n) {
  const std::vector<double> pos = equal_mass_positions(d, n);
  std::vector<Atom> atoms(n);
  for (int i = 0; i < n; ++i) atoms[i] = {pos[i], 1.0 / n};
  return AtomDist(std::move(atoms), /*merge_duplicates=*/false);
}

PriceDist shifted(const PriceDist& d, double s) {
  return visit_dist(d, [&](const auto& dd) -> PriceDist {
    using T = std::decay_t<decltype(dd)>;
    if constexpr (std::is_same_v<T, Degenerate>)
      return ParametricDist{Degenerate{dd.p + s}};
    else if constexpr (std::is_same_v<T, Uniform>)
      return ParametricDist{Uniform{dd.a + s, dd.b + s}};
    else if constexpr (std::is_same_v<T, Triangular>)
      return ParametricDist{Triangular{dd.center + s, dd.halfwidth}};
    else if constexpr (std::is_same_v<T, TruncatedGaussian>)
      return shifted(PriceDist{to_grid(d, kDefaultGridCells)}, s);
    else
      return dd.shifted(s);
  });
}

}  // namespace benchcost
