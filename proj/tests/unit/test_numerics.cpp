#include <cmath>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>
#include <pdmsusy/errors.hpp>
#include <pdmsusy/numerics.hpp>

using namespace pdmsusy;

namespace {

SampledFunction sample(const GridPtr& g, double (*f)(double)) {
  return SampledFunction::sample(g, [f](double x) { return f(x); });
}

double max_err(const SampledFunction& a, const std::function<double(double)>& f, std::size_t skip = 0) {
  double e = 0.0;
  for (std::size_t i = skip; i + skip < a.size(); ++i) e = std::max(e, std::abs(a[i] - f(a.x(i))));
  return e;
}

}  // namespace

TEST(Grid, UniformSpacingAndEndpoints) {
  auto g = build_grid(-1.0, 3.0, 401);
  EXPECT_EQ(g->size(), 401u);
  EXPECT_DOUBLE_EQ(g->spacing(), 0.01);
  EXPECT_DOUBLE_EQ((*g)[0], -1.0);
  EXPECT_DOUBLE_EQ((*g)[400], 3.0);
  EXPECT_EQ(g->nearest_index(0.0), 100u);
  EXPECT_EQ(g->nearest_index(-50.0), 0u);
  EXPECT_EQ(g->nearest_index(50.0), 400u);
}

TEST(Grid, RejectsBadInput) {
  EXPECT_THROW(build_grid(1.0, 0.0, 100), std::invalid_argument);
  EXPECT_THROW(build_grid(0.0, 1.0, 15), std::invalid_argument);
}

TEST(Grid, SliceSharesPoints) {
  auto g = build_grid(0.0, 1.0, 101);
  auto s = g->slice(10, 50);
  EXPECT_EQ(s->size(), 41u);
  EXPECT_EQ((*s)[0], (*g)[10]);
  EXPECT_EQ((*s)[40], (*g)[50]);
  EXPECT_DOUBLE_EQ(s->spacing(), g->spacing());
}

TEST(Grid, EqualityByBounds) {
  auto a = build_grid(0.0, 1.0, 101);
  auto b = build_grid(0.0, 1.0, 101);
  auto c = build_grid(0.0, 1.0, 102);
  EXPECT_TRUE(*a == *b);
  EXPECT_FALSE(*a == *c);
}

TEST(SampledFunction, ArithmeticRequiresSameGrid) {
  auto a = SampledFunction::constant(build_grid(0.0, 1.0, 32), 1.0);
  auto b = SampledFunction::constant(build_grid(0.0, 2.0, 32), 1.0);
  EXPECT_THROW(a + b, std::invalid_argument);
  auto c = a * 3.0 - a;
  EXPECT_DOUBLE_EQ(c[5], 2.0);
}

TEST(SampledFunction, DivisionByZeroMasks) {
  auto g = build_grid(-1.0, 1.0, 21);
  auto x = SampledFunction::sample(g, [](double v) { return v; });
  auto q = SampledFunction::constant(g, 1.0) / x;
  EXPECT_TRUE(q.is_masked(10));
  EXPECT_FALSE(q.is_masked(9));
}

TEST(Derivative, SecondOrderConvergence) {
  double errs[2];
  int k = 0;
  for (std::size_t n : {201u, 401u}) {
    auto g = build_grid(0.0, 2.0, n);
    auto d = derivative(sample(g, [](double x) { return std::sin(3.0 * x); }));
    errs[k++] = max_err(d, [](double x) { return 3.0 * std::cos(3.0 * x); });
  }
  EXPECT_NEAR(observed_order(errs[0], errs[1]), 2.0, 0.15);
}

TEST(Derivative, FourthOrderInterior) {
  double errs[2];
  int k = 0;
  for (std::size_t n : {201u, 401u}) {
    auto g = build_grid(0.0, 2.0, n);
    auto d = derivative(sample(g, [](double x) { return std::sin(3.0 * x); }), 2, Accuracy::fourth);
    errs[k++] = max_err(d, [](double x) { return -9.0 * std::sin(3.0 * x); }, 4);
  }
  EXPECT_NEAR(observed_order(errs[0], errs[1]), 4.0, 0.3);
}

TEST(Derivative, ExactOnQuadratics) {
  auto g = build_grid(-1.0, 1.0, 41);
  auto f = sample(g, [](double x) { return 2.0 * x * x - x + 3.0; });
  EXPECT_LT(max_err(derivative(f), [](double x) { return 4.0 * x - 1.0; }), 1e-12);
  EXPECT_LT(max_err(derivative(f, 2), [](double) { return 4.0; }), 1e-9);
}

TEST(Integration, CumulativeAnchoredAtZero) {
  auto g = build_grid(-2.0, 2.0, 801);
  auto f = sample(g, [](double x) { return std::cos(x); });
  auto F = integrate_cumulative(f);
  EXPECT_NEAR(F[400], 0.0, 1e-15);
  EXPECT_LT(max_err(F, [](double x) { return std::sin(x); }), 1e-5);
  EXPECT_THROW(integrate_cumulative(f, 5.0), std::invalid_argument);
}

TEST(Integration, AntiderivativeOffGridAnchor) {
  auto g = build_grid(0.5, 2.0, 301);
  auto F = antiderivative([](double x) { return std::sqrt(x); }, g, 0.0);
  EXPECT_LT(max_err(F, [](double x) { return 2.0 / 3.0 * std::pow(x, 1.5); }), 1e-13);
}

TEST(Integration, TrapezoidSkipsMaskedCells) {
  auto g = build_grid(0.0, 1.0, 101);
  auto f = SampledFunction::constant(g, 1.0);
  EXPECT_NEAR(integrate(f), 1.0, 1e-14);
  f[50] = std::nan("");
  EXPECT_NEAR(integrate(f), 0.98, 1e-12);
}

TEST(Integration, AdaptiveAndGaussLegendre) {
  EXPECT_NEAR(integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0),
              std::numbers::e - 1.0, 1e-14);
  EXPECT_NEAR(integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0), 2.0 / 3.0, 1e-12);
  std::vector<double> x, w;
  for (int n = 1; n <= 10; ++n) {
    gauss_legendre(n, x, w);
    double s = 0.0, p = 0.0;
    for (int i = 0; i < n; ++i) {
      s += w[i];
      p += w[i] * std::pow(x[i], 2 * n - 2);
    }
    EXPECT_NEAR(s, 2.0, 1e-14);
    EXPECT_NEAR(p, 2.0 / (2 * n - 1), 1e-13);
  }
}

TEST(Norms, NormalizeSignConvention) {
  auto g = build_grid(-5.0, 5.0, 1001);
  auto f = sample(g, [](double x) { return -std::exp(-x * x); });
  auto n = l2_normalize(f);
  EXPECT_NEAR(l2_norm(n), 1.0, 1e-14);
  EXPECT_GT(n[500], 0.0);
  EXPECT_THROW(l2_normalize(SampledFunction::zeros(g)), DegenerateFunctionError);
}

TEST(Wronskian, AntisymmetricAndConstantForSolutions) {
  auto g = build_grid(0.0, 3.0, 3001);
  auto s = sample(g, [](double x) { return std::sin(2.0 * x); });
  auto c = sample(g, [](double x) { return std::cos(2.0 * x); });
  auto w = wronskian(s, c);
  auto sum = w + wronskian(c, s);
  EXPECT_EQ(sum.max_abs(), 0.0);
  EXPECT_LT(max_err(w, [](double) { return -2.0; }, 1), 1e-4);
}

TEST(Wronskian, ThreeByThreeVanishesForDependentSet) {
  auto g = build_grid(0.0, 1.0, 501);
  auto a = sample(g, [](double x) { return std::exp(x); });
  auto b = sample(g, [](double x) { return std::exp(-x); });
  auto c = a * 2.0 - b * 3.0;
  EXPECT_LT(interior_max_abs(wronskian3(a, b, c)), 1e-8);
}

TEST(Diagnostics, NodesAndOrder) {
  auto g = build_grid(0.0, 1.0, 1001);
  auto f = sample(g, [](double x) { return std::sin(3.5 * std::numbers::pi * x); });
  EXPECT_EQ(count_nodes(f), 3);
  EXPECT_NEAR(observed_order(4e-4, 1e-4), 2.0, 1e-12);
}
