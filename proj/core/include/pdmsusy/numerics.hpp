#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace pdmsusy {

/// Uniform, strictly increasing grid on [x_min, x_max].
///
/// Grids are immutable and shared by reference between every function
/// sampled on them; two samplings are compatible when their grids compare
/// equal (same pointer, or same bounds and point count).
class Grid {
 public:
  static constexpr std::size_t kMinPoints = 16;

  Grid(double x_min, double x_max, std::size_t n_points);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t size() const noexcept { return points_.size(); }
  double spacing() const noexcept { return h_; }
  double operator[](std::size_t i) const { return points_[i]; }
  const std::vector<double>& points() const noexcept { return points_; }

  bool contains(double x) const noexcept { return x >= x_min_ && x <= x_max_; }
  /// Index of the grid point closest to x (clamped to the grid).
  std::size_t nearest_index(double x) const noexcept;

  /// Sub-grid over indices [first, last], sharing this grid's points exactly.
  std::shared_ptr<const Grid> slice(std::size_t first, std::size_t last) const;

  bool operator==(const Grid& other) const noexcept;

 private:
  Grid(std::vector<double> points, double h);

  double x_min_;
  double x_max_;
  double h_;
  std::vector<double> points_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// build_grid(x_min, x_max, n) -> uniform grid with spacing (x_max-x_min)/(n-1).
/// Throws std::invalid_argument for reversed bounds or n < 16.
GridPtr build_grid(double x_min, double x_max, std::size_t n_points);

/// A real function tabulated on a shared grid.
///
/// Non-finite samples (NaN) mark masked points, e.g. the neighbourhood of a
/// pole. Quadratures and residual norms skip them.
class SampledFunction {
 public:
  SampledFunction(GridPtr grid, std::vector<double> values);

  static SampledFunction zeros(GridPtr grid);
  static SampledFunction constant(GridPtr grid, double value);
  static SampledFunction sample(GridPtr grid, const std::function<double(double)>& f);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  double x(std::size_t i) const { return (*grid_)[i]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  bool is_masked(std::size_t i) const;
  double max_abs() const;

  /// Copy of the samples with indices [first, last] placed on `sub`.
  SampledFunction restricted(GridPtr sub, std::size_t first) const;

  /// Pointwise transform of the samples.
  SampledFunction map(const std::function<double(double)>& f) const;

  SampledFunction& operator+=(const SampledFunction& rhs);
  SampledFunction& operator-=(const SampledFunction& rhs);
  SampledFunction& operator*=(const SampledFunction& rhs);
  SampledFunction& operator*=(double s);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

SampledFunction operator+(SampledFunction a, const SampledFunction& b);
SampledFunction operator-(SampledFunction a, const SampledFunction& b);
SampledFunction operator*(SampledFunction a, const SampledFunction& b);
SampledFunction operator/(const SampledFunction& a, const SampledFunction& b);
SampledFunction operator*(SampledFunction a, double s);
SampledFunction operator*(double s, SampledFunction a);
SampledFunction operator-(SampledFunction a);

bool same_grid(const SampledFunction& a, const SampledFunction& b) noexcept;
/// Throws std::invalid_argument when the grids differ.
void require_same_grid(const SampledFunction& a, const SampledFunction& b, const char* where);

enum class Accuracy { second, fourth };

/// Central-difference derivative of order 1 or 2, one-sided at the ends
/// (four-point stencils there).
/// Accuracy::second is the default O(h^2) scheme; Accuracy::fourth uses
/// five-point stencils and is reserved for residual checks.
SampledFunction derivative(const SampledFunction& f, int order = 1,
                           Accuracy accuracy = Accuracy::second);

/// 0 when it lies on the grid, otherwise x_min.
double default_anchor(const Grid& grid) noexcept;

/// Trapezoidal antiderivative F with F(anchor) = 0.
SampledFunction integrate_cumulative(const SampledFunction& f,
                                     std::optional<double> anchor = std::nullopt);

/// Antiderivative of a callable evaluated cell by cell with 5-point
/// Gauss-Legendre; `anchor` may lie outside the grid, in which case the
/// missing piece is integrated adaptively.
SampledFunction antiderivative(const std::function<double(double)>& f, GridPtr grid,
                               double anchor);

/// Trapezoid rule over the grid, skipping cells with a masked endpoint.
double integrate(const SampledFunction& f);
double inner_product(const SampledFunction& f, const SampledFunction& g);
double l2_norm(const SampledFunction& f);

/// Unit L2 norm; the first sample exceeding 1e-8 max|f| is made positive.
/// Throws DegenerateFunctionError on an identically zero input.
SampledFunction l2_normalize(const SampledFunction& f);

/// f g' - f' g.
SampledFunction wronskian(const SampledFunction& f, const SampledFunction& g);

/// Determinant of the 3x3 Wronskian matrix of (f, g, k).
SampledFunction wronskian3(const SampledFunction& f, const SampledFunction& g,
                           const SampledFunction& k);

/// sqrt(sum r^2) / sqrt(sum f^2) over points at least `margin` cells from
/// either end where both samples are finite.
double interior_relative_norm(const SampledFunction& residual, const SampledFunction& reference,
                              std::size_t margin = 3);

/// max |f| over the same point set as interior_relative_norm.
double interior_max_abs(const SampledFunction& f, std::size_t margin = 3);

/// Number of sign changes, ignoring samples below floor * max|f|.
int count_nodes(const SampledFunction& f, double floor = 1e-9);

/// Observed convergence order from errors on successively halved grids.
double observed_order(double coarse_error, double fine_error, double refinement = 2.0);

// Quadrature ----------------------------------------------------------------

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-14, double abs_tol = 1e-15);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], n in [1, 10].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Special functions ---------------------------------------------------------

/// E[phi | k] = integral_0^phi sqrt(1 - k sin^2 t) dt.
///
/// `k` is the parameter (it multiplies sin^2 directly), not the modulus.
/// Any real phi is accepted for k <= 1 via E[phi + pi] = E[phi] + 2 E[pi/2].
/// For k > 1 the integrand is real only up to asin(1/sqrt(k)); beyond that
/// std::domain_error is thrown.
double incomplete_elliptic_e(double phi, double k);

/// Complete integral E[pi/2 | k], k <= 1.
double complete_elliptic_e(double k);

}  // namespace pdmsusy
