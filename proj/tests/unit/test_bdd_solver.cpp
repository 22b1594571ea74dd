#include <cmath>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>
#include <pdmsusy/bdd_solver.hpp>

using namespace pdmsusy;

namespace {

constexpr double kPi = std::numbers::pi;

SpectrumReport well(double length, std::size_t n, std::size_t k, double mass = 1.0,
                    BoundaryCondition bc = BoundaryCondition::dirichlet()) {
  const auto p = constant_profile(mass);
  auto g = build_grid(0.0, length, n);
  return solve_spectrum(discretize(p, SampledFunction::zeros(g), bc), k, p);
}

}  // namespace

TEST(Solver, InfiniteWell) {
  const auto rep = well(2.0, 2001, 4, 0.5);
  for (int j = 0; j < 4; ++j) {
    const double exact = std::pow((j + 1) * kPi / 2.0, 2) / (2.0 * 0.5);
    EXPECT_NEAR(rep.eigenvalues[j], exact, 2e-5 * exact);
    EXPECT_EQ(rep.node_counts[j], j);
  }
}

TEST(Solver, SecondOrderConvergence) {
  const double exact = kPi * kPi / 2.0;
  const double e1 = std::abs(well(1.0, 101, 1).eigenvalues[0] - exact);
  const double e2 = std::abs(well(1.0, 201, 1).eigenvalues[0] - exact);
  const double e3 = std::abs(well(1.0, 401, 1).eigenvalues[0] - exact);
  EXPECT_NEAR(observed_order(e1, e2), 2.0, 0.05);
  EXPECT_NEAR(observed_order(e2, e3), 2.0, 0.05);
}

TEST(Solver, NeumannEnds) {
  BoundaryCondition bc{0.0, 1.0, 0.0, 1.0};
  const auto rep = well(1.0, 2001, 3, 1.0, bc);
  EXPECT_NEAR(rep.eigenvalues[0], 0.0, 1e-8);
  EXPECT_NEAR(rep.eigenvalues[1], kPi * kPi / 2.0, 1e-4);
  EXPECT_NEAR(rep.eigenvalues[2], 2.0 * kPi * kPi, 1e-3);
  // The constant ground state is returned on every grid point.
  EXPECT_NEAR(rep.eigenfunctions[0][0], rep.eigenfunctions[0][1000], 1e-8);
}

TEST(Solver, RobinEnd) {
  // psi(0) = 0 and psi + psi' = 0 at x = 1: k satisfies tan k = -k.
  BoundaryCondition bc{1.0, 0.0, 1.0, 1.0};
  const auto rep = well(1.0, 4001, 1, 1.0, bc);
  double k = 2.0;
  for (int i = 0; i < 50; ++i) k -= (std::tan(k) + k) / (1.0 / (std::cos(k) * std::cos(k)) + 1.0);
  EXPECT_NEAR(rep.eigenvalues[0], 0.5 * k * k, 1e-5);
  const auto chk = check_boundary_condition(rep.eigenfunctions[0], constant_profile(1.0), bc, 1e-2);
  EXPECT_TRUE(chk.satisfied) << chk.residual;
}

TEST(Solver, HarmonicOscillator) {
  const auto p = constant_profile(1.0);
  auto g = build_grid(-8.0, 8.0, 4001);
  const auto v = SampledFunction::sample(g, [](double x) { return 0.5 * x * x; });
  const auto op = discretize(p, v);
  const auto rep = solve_spectrum(op, 6, p);
  for (int j = 0; j < 6; ++j) EXPECT_NEAR(rep.eigenvalues[j], j + 0.5, 5e-5);
  const auto s = overlap_matrix(rep.eigenfunctions);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) EXPECT_NEAR(s[i][j], i == j ? 1.0 : 0.0, 1e-8);
  }
  // Eigenfunctions satisfy the discrete operator.
  const auto hpsi = op.apply(rep.eigenfunctions[2]);
  double res = 0.0;
  for (std::size_t i = 1; i + 1 < g->size(); ++i) {
    res = std::max(res, std::abs(hpsi[i] - rep.eigenvalues[2] * rep.eigenfunctions[2][i]));
  }
  EXPECT_LT(res, 1e-8);
}

TEST(Solver, VariableMassSelfConvergence) {
  const auto p = cosine_profile(1.5);
  auto solve = [&](std::size_t n) {
    auto g = build_grid(0.0, 3.0, n);
    return solve_spectrum(discretize(p, SampledFunction::zeros(g)), 2, p).eigenvalues;
  };
  const auto a = solve(401), b = solve(801), c = solve(1601);
  EXPECT_NEAR(std::log2((b[0] - a[0]) / (c[0] - b[0])), 2.0, 0.05);
}

TEST(Solver, Preconditions) {
  const auto p = constant_profile(1.0);
  auto g = build_grid(0.0, 1.0, 101);
  const auto op = discretize(p, SampledFunction::zeros(g));
  EXPECT_THROW(solve_spectrum(op, 0, p), std::invalid_argument);
  EXPECT_THROW(solve_spectrum(op, 26, p), std::invalid_argument);
  BoundaryCondition bad{0.0, 0.0, 1.0, 0.0};
  EXPECT_THROW(discretize(p, SampledFunction::zeros(g), bad), std::invalid_argument);
  EXPECT_THROW(discretize(linear_profile(), SampledFunction::zeros(build_grid(-1.0, 1.0, 101))),
               std::domain_error);
}

TEST(Solver, WideningReachesStableSpectrum) {
  const auto p = constant_profile(1.0);
  PotentialBuilder v = [](const GridPtr& g) {
    return SampledFunction::sample(g, [](double x) { return 0.5 * x * x; });
  };
  const auto w = solve_with_widening(p, v, -2.0, 2.0, 0.004, 3);
  EXPECT_GT(w.widenings, 0);
  EXPECT_LT(w.last_shift, 1e-8);
  EXPECT_NEAR(w.grid->spacing(), 0.004, 1e-12);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(w.report.eigenvalues[j], j + 0.5, 1e-5);
}

TEST(Solver, FixedEndsAreKept) {
  const auto p = constant_profile(1.0);
  PotentialBuilder v = [](const GridPtr& g) {
    return SampledFunction::sample(g, [](double x) { return 0.5 * x * x; });
  };
  const auto w = solve_with_widening(p, v, 0.0, 2.0, 0.004, 2, true, false);
  EXPECT_DOUBLE_EQ(w.grid->x_min(), 0.0);
  EXPECT_NEAR(w.report.eigenvalues[0], 1.5, 1e-5);
  EXPECT_NEAR(w.report.eigenvalues[1], 3.5, 1e-4);
}

TEST(Extrapolation, Richardson) {
  // f(h) = 1 + 3 h^2.
  EXPECT_NEAR(richardson(1.0 + 3.0 * 0.04, 1.0 + 3.0 * 0.01), 1.0, 1e-14);
  // f(eps) = 2 + 5 eps^1.5.
  auto f = [](double e) { return 2.0 + 5.0 * std::pow(e, 1.5); };
  EXPECT_NEAR(extrapolate_power(0.01, f(0.01), 0.02, f(0.02), 1.5), 2.0, 1e-13);
}

TEST(Boundary, CheckReportsBothEnds) {
  const auto p = constant_profile(1.0);
  auto g = build_grid(0.0, 1.0, 101);
  const auto s = SampledFunction::sample(g, [](double x) { return std::sin(kPi * x) + 0.01 * x; });
  const auto chk = check_boundary_condition(s, p, BoundaryCondition::dirichlet(), 1e-4);
  EXPECT_FALSE(chk.satisfied);
  EXPECT_NEAR(chk.left, 0.0, 1e-15);
  EXPECT_GT(chk.right, 1e-3);
}
