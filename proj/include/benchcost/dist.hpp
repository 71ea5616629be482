#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace benchcost {

using Eigen::ArrayXd;

// Default quadrature resolution for grid discretizations.
inline constexpr int kDefaultGridCells = 10001;

// ---------------------------------------------------------------------------
// Parametric families. Each is symmetric around its center; Triangular and
// TruncatedGaussian are strictly single-peaked, Uniform only weakly so.
// ---------------------------------------------------------------------------

struct Degenerate {
  double p = 0.0;
};

struct Uniform {
  double a = -1.0;
  double b = 1.0;
};

// Density (1 - |x - center|/halfwidth)/halfwidth on [center - hw, center + hw].
struct Triangular {
  double center = 0.0;
  double halfwidth = 1.0;
};

// Standard normal with scale sigma truncated to [-halfwidth, halfwidth],
// centered at zero.
struct TruncatedGaussian {
  double sigma = 1.0;
  double halfwidth = 1.0;
};

using ParametricDist =
    std::variant<Degenerate, Uniform, Triangular, TruncatedGaussian>;

// ---------------------------------------------------------------------------
// GridDist: cell-midpoint densities on [lo, hi], piecewise-linear CDF.
// ---------------------------------------------------------------------------

class GridDist {
 public:
  // Validates: n >= 2, hi > lo, density >= 0, total mass 1 within 1e-12.
  GridDist(double lo, double hi, ArrayXd density);

  // Renormalizes a non-negative density to total mass 1.
  static GridDist from_density(double lo, double hi, ArrayXd density);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double dx() const { return dx_; }
  int cells() const { return static_cast<int>(density_.size()); }
  const ArrayXd& density() const { return density_; }

  double cdf(double x) const;
  double quantile(double q) const;        // generalized inverse: inf{x: F(x) >= q}
  double quantile_upper(double q) const;  // inf{x: F(x) > q}
  double pdf(double x) const;             // linear interpolation between midpoints
  double mean() const;
  GridDist shifted(double s) const;

 private:
  double lo_, hi_, dx_;
  ArrayXd density_;
  std::vector<double> cum_;  // CDF at cell boundaries, size cells()+1
};

// ---------------------------------------------------------------------------
// AtomDist: finite list of point masses.
// ---------------------------------------------------------------------------

struct Atom {
  double pos = 0.0;
  double mass = 0.0;
};

class AtomDist {
 public:
  // Sorts by position; duplicates are merged unless merge_duplicates is
  // false (equal-mass samples keep one atom per sample then).
  explicit AtomDist(std::vector<Atom> atoms, bool merge_duplicates = true);

  const std::vector<Atom>& atoms() const { return atoms_; }

  double cdf(double x) const;  // right-continuous step
  double quantile(double q) const;
  double quantile_upper(double q) const;
  double mean() const;
  AtomDist shifted(double s) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<double> cum_;
};

using PriceDist = std::variant<ParametricDist, GridDist, AtomDist>;

// Applies f to the concrete distribution, unwrapping ParametricDist.
template <class F>
decltype(auto) visit_dist(const PriceDist& d, F&& f) {
  return std::visit(
      [&](const auto& inner) -> decltype(auto) {
        if constexpr (std::is_same_v<std::decay_t<decltype(inner)>,
                                     ParametricDist>) {
          return std::visit(f, inner);
        } else {
          return f(inner);
        }
      },
      d);
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

double cdf(const PriceDist& d, double x);
double quantile(const PriceDist& d, double q);
double quantile_upper(const PriceDist& d, double q);

// Density at x. Zero outside the support; throws for Degenerate and AtomDist.
double pdf(const PriceDist& d, double x);

double mean(const PriceDist& d);

// Midpoint of the median interval [quantile(1/2), quantile_upper(1/2)].
double median(const PriceDist& d);

std::pair<double, double> support(const PriceDist& d);

// Deterministic probe: 1024 offsets spanning the support; true iff the
// density (or atom pattern) mirrors across `center` within tol.
bool is_symmetric(const PriceDist& d, double center, double tol);

// True for families/grids whose density strictly increases to a unique peak
// and strictly decreases after it. Uniform and atoms are not.
bool strictly_single_peaked(const PriceDist& d);

// Density sampling + renormalization. Rejects Degenerate (use to_atoms).
GridDist to_grid(const PriceDist& d, int n = kDefaultGridCells);

// Equal-mass atomization: n atoms of mass 1/n at the (i+1/2)/n quantiles.
AtomDist to_atoms(const PriceDist& d, int n);

// Sorted positions of the equal-mass atomization.
std::vector<double> equal_mass_positions(const PriceDist& d, int n);

PriceDist shifted(const PriceDist& d, double s);

}  // namespace benchcost
