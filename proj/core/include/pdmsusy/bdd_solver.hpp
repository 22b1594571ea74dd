#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "pdmsusy/mass_profile.hpp"
#include "pdmsusy/numerics.hpp"
#include "pdmsusy/tridiagonal.hpp"

namespace pdmsusy {

/// Separated conditions c1 y + c2 (1/m) y' = 0 at each end.
struct BoundaryCondition {
  double c1_left = 1.0;
  double c2_left = 0.0;
  double c1_right = 1.0;
  double c2_right = 0.0;

  static BoundaryCondition dirichlet() { return {}; }
  bool left_dirichlet() const noexcept { return c2_left == 0.0; }
  bool right_dirichlet() const noexcept { return c2_right == 0.0; }
  /// Throws std::invalid_argument when (c1, c2) = (0, 0) at an end.
  void validate() const;
};

/// Flux-form discretization of -(hbar^2/2)(psi'/m)' + V psi.
///
/// The stored matrix acts on the unknowns [first, last] of the grid; for a
/// Robin end the boundary row is symmetrized with weight 1/2, so that
/// eigenvector entry z_0 corresponds to y_0 = sqrt(2) z_0.
struct DiscretizedOperator {
  GridPtr grid;
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;
  BoundaryCondition boundary;
  std::vector<double> mass_at_midpoints;
  SampledFunction potential;
  double hbar = 1.0;
  std::size_t first = 0;
  std::size_t last = 0;

  SymTridiagonal matrix() const { return {diagonal, off_diagonal}; }

  /// Discrete operator applied to samples on the full grid. Interior rows use
  /// the three-point flux stencil; Robin end rows use the half-cell balance;
  /// Dirichlet end rows are NaN.
  SampledFunction apply(const SampledFunction& psi) const;

  /// Grid function for an eigenvector of matrix().
  SampledFunction to_grid_function(const std::vector<double>& z) const;
};

DiscretizedOperator discretize(const MassProfile& profile, const SampledFunction& potential,
                               const BoundaryCondition& bc = BoundaryCondition::dirichlet(),
                               double hbar = 1.0);

struct SpectrumReport {
  std::vector<double> eigenvalues;
  std::vector<SampledFunction> eigenfunctions;
  std::vector<int> node_counts;
  std::vector<double> bc_residuals;
};

/// k lowest eigenpairs; requires 1 <= k < n_points/4.
SpectrumReport solve_spectrum(const DiscretizedOperator& op, std::size_t k,
                              const MassProfile& profile);

struct BoundaryCheck {
  bool satisfied;
  double residual;  // max of left and right
  double left;
  double right;
};

/// |c1 psi + c2 psi'/m| / max|psi| at both ends, compared with `tolerance`.
BoundaryCheck check_boundary_condition(const SampledFunction& psi, const MassProfile& profile,
                                       const BoundaryCondition& bc, double tolerance = 1e-4);

/// Gram matrix of the states by the trapezoid rule.
std::vector<std::vector<double>> overlap_matrix(const std::vector<SampledFunction>& states);

/// Builds a potential for any grid (used by the widening loop).
using PotentialBuilder = std::function<SampledFunction(const GridPtr&)>;

struct WidenedSpectrum {
  SpectrumReport report;
  GridPtr grid;
  int widenings = 0;
  double last_shift = 0.0;  // max eigenvalue change in the final step
};

/// Solves on [x_min, x_max] at fixed spacing h, extending each free end by
/// 10% of the cell count until the k lowest eigenvalues move by less than
/// `shift_tol`. Ends flagged fixed are never moved.
WidenedSpectrum solve_with_widening(const MassProfile& profile, const PotentialBuilder& potential,
                                    double x_min, double x_max, double h, std::size_t k,
                                    bool fix_left = false, bool fix_right = false,
                                    double shift_tol = 1e-8, double hbar = 1.0,
                                    int max_widenings = 12);

/// Richardson extrapolation for a quantity converging as h^order.
double richardson(double coarse, double fine, double order = 2.0, double ratio = 2.0);

/// Extrapolates f(eps) = f0 + C eps^power to eps = 0 from two samples.
double extrapolate_power(double eps1, double f1, double eps2, double f2, double power);

}  // namespace pdmsusy
