#include <cmath>

#include <gtest/gtest.h>
#include <pdmsusy/ladder.hpp>

#include "oracles.hpp"

using namespace pdmsusy;

namespace {

double max_diff(const SampledFunction& f, const std::vector<double>& ref, std::size_t margin = 0) {
  double e = 0.0;
  for (std::size_t i = margin; i + margin < f.size(); ++i) e = std::max(e, std::abs(f[i] - ref[i]));
  return e;
}

double max_rel(const SampledFunction& f, const std::function<double(double)>& ref) {
  double e = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = ref(f.x(i));
    e = std::max(e, std::abs(f[i] - r) / std::max(1.0, std::abs(r)));
  }
  return e;
}

LadderSystem cosine_system(double m0, std::size_t n = 4001, double lim = 8.0) {
  return build_ladder_system(cosine_profile(m0), 1.0, build_grid(-lim, lim, n));
}

}  // namespace

TEST(Ladder, CosinePotentialMatchesClosedForm) {
  for (double m0 : {1.15, 2.0}) {
    const auto sys = cosine_system(m0);
    const oracle::Cosine ref{m0};
    EXPECT_LT(max_rel(sys.potential, [&](double x) { return ref.v(x); }), 1e-10) << m0;
    EXPECT_LT(max_rel(sys.antiderivative_sqrt_m, [&](double x) { return ref.s(x); }), 1e-12);
    EXPECT_DOUBLE_EQ(sys.anchor, 0.0);
  }
}

TEST(Ladder, CosineGroundStateMatchesClosedForm) {
  const auto sys = cosine_system(1.15);
  const oracle::Cosine ref{1.15};
  const auto psi = oracle::normalized(sys.grid->points(), [&](double x) { return ref.psi0(x); });
  EXPECT_LT(max_diff(sys.psi0, psi), 1e-10);
  EXPECT_DOUBLE_EQ(sys.e0, 0.5);
}

TEST(Ladder, StatesMatchHermiteForms) {
  const auto sys = cosine_system(1.15);
  const oracle::Cosine ref{1.15};
  const auto tower = state_tower(sys, 5);
  ASSERT_EQ(tower.size(), 6u);
  for (int n = 0; n <= 5; ++n) {
    const auto expected = oracle::normalized(sys.grid->points(), [&](double x) {
      return oracle::ladder_state(n, ref.m(x), ref.s(x), 1.0);
    }, true);
    EXPECT_LT(max_diff(tower[n].wavefunction, expected), 1e-8) << n;
    EXPECT_DOUBLE_EQ(tower[n].energy, n + 0.5);
    EXPECT_TRUE(tower[n].satisfies_bc);
    EXPECT_EQ(count_nodes(tower[n].wavefunction), n);
  }
}

TEST(Ladder, ScaledConstantsAndSpacing) {
  // delta_e = 2, hbar = 0.5, a = 0.8 on the cosine profile.
  const auto p = cosine_profile(2.0);
  const auto sys = build_ladder_system(p, 2.0, build_grid(-6.0, 6.0, 2001), 0.8, 0.5);
  EXPECT_NEAR(sys.commutator(), 0.64 * 2.0 / 0.25, 1e-14);
  const auto st = nth_state(sys, 3);
  EXPECT_DOUBLE_EQ(st.energy, 7.0);
  EXPECT_LT(eigen_residual(sys, st.wavefunction, st.energy, Accuracy::fourth), 1e-3);
}

TEST(Ladder, QuadraticPotentialWithShiftedAnchor) {
  const oracle::Quadratic ref{0.15};
  const double anchor = ref.shifted_anchor();
  const auto sys = build_ladder_system(quadratic_profile(0.15), 1.0, build_grid(-5.0, 5.0, 2001),
                                       std::nullopt, 1.0, anchor);
  EXPECT_LT(max_rel(sys.potential, [&](double x) { return ref.v_shifted(x); }), 1e-9);
}

TEST(Ladder, QuadraticDefaultAnchor) {
  const oracle::Quadratic ref{0.15};
  const auto sys = build_ladder_system(quadratic_profile(0.15), 1.0, build_grid(-5.0, 5.0, 2001));
  EXPECT_LT(max_rel(sys.antiderivative_sqrt_m, [&](double x) { return ref.s(x); }), 1e-12);
  const auto psi = oracle::normalized(sys.grid->points(), [&](double x) {
    return oracle::ladder_state(0, ref.m(x), ref.s(x), 1.0);
  });
  EXPECT_LT(max_diff(sys.psi0, psi), 1e-10);
}

TEST(Ladder, LinearProfile) {
  const oracle::Linear ref;
  const auto sys = build_ladder_system(linear_profile(), 1.0, build_grid(0.001, 6.0, 6000));
  EXPECT_DOUBLE_EQ(sys.anchor, 0.0);
  EXPECT_LT(max_rel(sys.antiderivative_sqrt_m, [&](double x) { return ref.s(x); }), 1e-12);
  double worst = 0.0;
  for (std::size_t i = 0; i < sys.potential.size(); ++i) {
    const double r = ref.v(sys.potential.x(i));
    worst = std::max(worst, std::abs(sys.potential[i] - r) / std::max(1.0, std::abs(r)));
  }
  EXPECT_LT(worst, 1e-10);
  const auto psi = oracle::normalized(sys.grid->points(), [&](double x) { return ref.psi0(x); });
  EXPECT_LT(max_diff(sys.psi0, psi), 1e-10);
}

TEST(Ladder, LinearParitySelection) {
  const auto sys = build_ladder_system(linear_profile(), 1.0, build_grid(0.001, 6.0, 4001));
  const auto tower = state_tower(sys, 5);
  for (int n = 0; n <= 5; ++n) EXPECT_EQ(tower[n].satisfies_bc, n % 2 == 1) << n;
}

TEST(Ladder, AnnihilatesGroundState) {
  const auto sys = cosine_system(1.15);
  EXPECT_LT(interior_relative_norm(apply_lowering(sys, sys.psi0), sys.psi0), 1e-4);
}

TEST(Ladder, RaisingMapsStates) {
  const auto sys = cosine_system(1.15);
  const auto tower = state_tower(sys, 3);
  auto up = l2_normalize(apply_raising(sys, tower[2].wavefunction));
  if (inner_product(up, tower[3].wavefunction) < 0.0) up = -up;
  double e = 0.0;
  for (std::size_t i = 10; i + 10 < up.size(); ++i) e = std::max(e, std::abs(up[i] - tower[3].wavefunction[i]));
  EXPECT_LT(e, 1e-3);
}

TEST(Ladder, CommutatorConvergesAtSecondOrder) {
  std::vector<double> err;
  for (std::size_t n : {1001u, 2001u, 4001u}) {
    const auto sys = cosine_system(1.15, n, 6.0);
    err.push_back(commutator_residual(sys, interior_test_functions(sys.grid, 3, std::pair{-3.0, 3.0})));
  }
  EXPECT_LT(err[2], 1e-3);
  EXPECT_NEAR(observed_order(err[0], err[1]), 2.0, 0.2);
  EXPECT_NEAR(observed_order(err[1], err[2]), 2.0, 0.2);
}

TEST(Ladder, BddApplyOnExactState) {
  const auto sys = cosine_system(2.0);
  const auto st = nth_state(sys, 4);
  EXPECT_LT(eigen_residual(sys, st.wavefunction, st.energy, Accuracy::fourth), 1e-5);
  EXPECT_LT(eigen_residual(sys, st.wavefunction, st.energy), 1e-3);
  EXPECT_LT(hamiltonian_commutation_defect(sys, st.wavefunction), 1e-3);
}

TEST(Ladder, TestFunctionsAreSupportedInside) {
  auto g = build_grid(-4.0, 4.0, 801);
  const auto fs = interior_test_functions(g, 3, std::pair{-1.0, 2.0});
  ASSERT_EQ(fs.size(), 3u);
  for (const auto& f : fs) {
    EXPECT_GT(f.max_abs(), 0.1);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.x(i) < -1.0 || f.x(i) > 2.0) EXPECT_EQ(f[i], 0.0);
    }
  }
}

TEST(Ladder, AutoWidenKeepsCountAndFixedEnd) {
  const auto p = cosine_profile(1.15);
  const auto g = auto_widen_grid(p, 1.0, GridRequest{-3.0, 3.0, 1001}, 5);
  EXPECT_EQ(g->size(), 1001u);
  EXPECT_LT(g->x_min(), -3.0);
  EXPECT_GT(g->x_max(), 3.0);
  const auto lin = auto_widen_grid(linear_profile(), 1.0, GridRequest{0.001, 2.0, 1001, true}, 5);
  EXPECT_DOUBLE_EQ(lin->x_min(), 0.001);
  EXPECT_GT(lin->x_max(), 2.0);
}
