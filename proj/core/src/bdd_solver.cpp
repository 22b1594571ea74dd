#include "pdmsusy/bdd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pdmsusy {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void BoundaryCondition::validate() const {
  if (c1_left == 0.0 && c2_left == 0.0) {
    throw std::invalid_argument("BoundaryCondition: (c1, c2) = (0, 0) at the left end");
  }
  if (c1_right == 0.0 && c2_right == 0.0) {
    throw std::invalid_argument("BoundaryCondition: (c1, c2) = (0, 0) at the right end");
  }
}

DiscretizedOperator discretize(const MassProfile& profile, const SampledFunction& potential,
                               const BoundaryCondition& bc, double hbar) {
  bc.validate();
  const GridPtr& grid = potential.grid_ptr();
  const Grid& g = *grid;
  profile.require_grid(g, "discretize");
  const std::size_t n = g.size();
  const double h = g.spacing();

  std::vector<double> mid(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double xm = 0.5 * (g[i] + g[i + 1]);
    const double m = profile.m(xm);
    if (!(m > 0.0)) {
      std::ostringstream os;
      os.precision(17);
      os << "discretize: non-positive mass " << m << " at midpoint x = " << xm;
      throw std::domain_error(os.str());
    }
    mid[i] = m;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(potential[i])) {
      throw std::domain_error("discretize: potential is not finite on the grid");
    }
  }

  DiscretizedOperator op{grid, {}, {}, bc, mid, potential, hbar, 0, n - 1};
  op.first = bc.left_dirichlet() ? 1 : 0;
  op.last = bc.right_dirichlet() ? n - 2 : n - 1;
  const double k = hbar * hbar / (2.0 * h * h);
  auto p = [&](std::size_t i) { return 1.0 / mid[i]; };  // p at x_{i+1/2}

  for (std::size_t i = op.first; i <= op.last; ++i) {
    double d;
    if (i == 0) {
      d = 2.0 * k * p(0) - hbar * hbar / h * (bc.c1_left / bc.c2_left) + potential[0];
    } else if (i == n - 1) {
      d = 2.0 * k * p(n - 2) + hbar * hbar / h * (bc.c1_right / bc.c2_right) + potential[n - 1];
    } else {
      d = k * (p(i - 1) + p(i)) + potential[i];
    }
    op.diagonal.push_back(d);
    if (i < op.last) {
      double e = -k * p(i);
      if (i == 0 || i + 1 == n - 1) e *= std::sqrt(2.0);
      op.off_diagonal.push_back(e);
    }
  }
  return op;
}

SampledFunction DiscretizedOperator::apply(const SampledFunction& psi) const {
  if (!(psi.grid() == *grid)) {
    throw std::invalid_argument("DiscretizedOperator::apply: grid mismatch");
  }
  const Grid& g = *grid;
  const std::size_t n = g.size();
  const double h = g.spacing();
  const double k = hbar * hbar / (2.0 * h * h);
  std::vector<double> out(n, kNaN);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double pl = 1.0 / mass_at_midpoints[i - 1], pr = 1.0 / mass_at_midpoints[i];
    out[i] = k * (pl * (psi[i] - psi[i - 1]) + pr * (psi[i] - psi[i + 1])) +
             potential[i] * psi[i];
  }
  if (!boundary.left_dirichlet()) {
    const double p0 = 1.0 / mass_at_midpoints[0];
    out[0] = 2.0 * k * p0 * (psi[0] - psi[1]) -
             hbar * hbar / h * (boundary.c1_left / boundary.c2_left) * psi[0] +
             potential[0] * psi[0];
  }
  if (!boundary.right_dirichlet()) {
    const double pn = 1.0 / mass_at_midpoints[n - 2];
    out[n - 1] = 2.0 * k * pn * (psi[n - 1] - psi[n - 2]) +
                 hbar * hbar / h * (boundary.c1_right / boundary.c2_right) * psi[n - 1] +
                 potential[n - 1] * psi[n - 1];
  }
  return SampledFunction(grid, std::move(out));
}

SampledFunction DiscretizedOperator::to_grid_function(const std::vector<double>& z) const {
  const std::size_t n = grid->size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = first; i <= last; ++i) y[i] = z[i - first];
  if (first == 0) y[0] *= std::sqrt(2.0);
  if (last == n - 1) y[n - 1] *= std::sqrt(2.0);
  return SampledFunction(grid, std::move(y));
}

BoundaryCheck check_boundary_condition(const SampledFunction& psi, const MassProfile& profile,
                                       const BoundaryCondition& bc, double tolerance) {
  bc.validate();
  const double peak = psi.max_abs();
  if (peak == 0.0) return {true, 0.0, 0.0, 0.0};
  const std::size_t n = psi.size();
  double dl = 0.0, dr = 0.0;
  if (bc.c2_left != 0.0 || bc.c2_right != 0.0) {
    const auto d = derivative(psi);
    dl = d[0];
    dr = d[n - 1];
  }
  const Grid& g = psi.grid();
  const double left =
      std::abs(bc.c1_left * psi[0] +
               (bc.c2_left != 0.0 ? bc.c2_left * dl / profile.m(g.x_min()) : 0.0)) /
      peak;
  const double right =
      std::abs(bc.c1_right * psi[n - 1] +
               (bc.c2_right != 0.0 ? bc.c2_right * dr / profile.m(g.x_max()) : 0.0)) /
      peak;
  const double r = std::max(left, right);
  return {r < tolerance, r, left, right};
}

SpectrumReport solve_spectrum(const DiscretizedOperator& op, std::size_t k,
                              const MassProfile& profile) {
  const std::size_t n = op.grid->size();
  if (k < 1 || 4 * k >= n) {
    throw std::invalid_argument("solve_spectrum: require 1 <= k < n_points/4");
  }
  const Eigenpairs pairs = lowest_eigenpairs(op.matrix(), k);
  SpectrumReport report;
  report.eigenvalues = pairs.values;
  for (const auto& z : pairs.vectors) {
    SampledFunction f = l2_normalize(op.to_grid_function(z));
    report.node_counts.push_back(count_nodes(f, 1e-9));
    report.bc_residuals.push_back(check_boundary_condition(f, profile, op.boundary).residual);
    report.eigenfunctions.push_back(std::move(f));
  }
  return report;
}

std::vector<std::vector<double>> overlap_matrix(const std::vector<SampledFunction>& states) {
  const std::size_t n = states.size();
  std::vector<std::vector<double>> s(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      s[i][j] = s[j][i] = inner_product(states[i], states[j]);
    }
  }
  return s;
}

WidenedSpectrum solve_with_widening(const MassProfile& profile, const PotentialBuilder& potential,
                                    double x_min, double x_max, double h, std::size_t k,
                                    bool fix_left, bool fix_right, double shift_tol, double hbar,
                                    int max_widenings) {
  if (!(h > 0.0)) throw std::invalid_argument("solve_with_widening: h must be positive");
  auto cells = static_cast<std::size_t>(std::llround((x_max - x_min) / h));
  double lo = x_min;
  auto solve = [&](std::size_t nc, double left) {
    GridPtr grid = build_grid(left, left + h * static_cast<double>(nc), nc + 1);
    auto op = discretize(profile, potential(grid), BoundaryCondition::dirichlet(), hbar);
    return WidenedSpectrum{solve_spectrum(op, k, profile), grid, 0, 0.0};
  };
  WidenedSpectrum current = solve(cells, lo);
  for (int w = 1; w <= max_widenings; ++w) {
    const auto grow = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(cells)));
    std::size_t add = 0;
    if (!fix_left) {
      lo -= h * static_cast<double>(grow);
      add += grow;
    }
    if (!fix_right) add += grow;
    if (add == 0) break;
    cells += add;
    WidenedSpectrum next = solve(cells, lo);
    double shift = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      shift = std::max(shift, std::abs(next.report.eigenvalues[j] - current.report.eigenvalues[j]));
    }
    next.widenings = w;
    next.last_shift = shift;
    current = std::move(next);
    if (shift < shift_tol) break;
  }
  return current;
}

double richardson(double coarse, double fine, double order, double ratio) {
  return fine + (fine - coarse) / (std::pow(ratio, order) - 1.0);
}

double extrapolate_power(double eps1, double f1, double eps2, double f2, double power) {
  const double a = std::pow(eps1, power), b = std::pow(eps2, power);
  const double c = (f1 - f2) / (a - b);
  return f1 - c * a;
}

}  // namespace pdmsusy
