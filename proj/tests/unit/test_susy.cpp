#include <cmath>
#include <numbers>

#include <gtest/gtest.h>
#include <pdmsusy/errors.hpp>
#include <pdmsusy/susy.hpp>

#include "oracles.hpp"

using namespace pdmsusy;

namespace {

/// max |f - ref| / max(1, |ref|) over finite samples with x in (lo, hi),
/// three cells clear of the grid ends.
double max_rel(const SampledFunction& f, const std::function<double(double)>& ref, double lo,
               double hi) {
  double e = 0.0;
  for (std::size_t i = 3; i + 3 < f.size(); ++i) {
    const double x = f.x(i);
    if (x <= lo || x >= hi || !std::isfinite(f[i])) continue;
    const double r = ref(x);
    e = std::max(e, std::abs(f[i] - r) / std::max(1.0, std::abs(r)));
  }
  return e;
}

struct CosineFixture : ::testing::Test {
  static constexpr double kM0 = 1.15;
  LadderSystem sys = build_ladder_system(cosine_profile(kM0), 1.0, build_grid(-8.0, 8.0, 4001));
  std::vector<FormalState> tower = state_tower(sys, 5);
  oracle::Cosine ref{kM0};
};

}  // namespace

TEST(Singularities, SignChangesAndSubdomains) {
  auto g = build_grid(-4.0, 4.0, 801);
  const auto f = SampledFunction::sample(g, [](double x) { return std::sin(x); });
  const auto r = find_singularities(f);
  ASSERT_EQ(r.locations.size(), 3u);
  EXPECT_NEAR(r.locations[0], -std::numbers::pi, 1e-4);
  EXPECT_NEAR(r.locations[1], 0.0, 1e-12);
  EXPECT_NEAR(r.locations[2], std::numbers::pi, 1e-4);
  ASSERT_EQ(r.subdomains.size(), 4u);
  EXPECT_TRUE(r.masked[400]);
  EXPECT_TRUE(r.masked[403]);
  EXPECT_FALSE(r.masked[404]);
  EXPECT_TRUE(std::isnan(r.apply_mask(f)[400]));
}

TEST(Singularities, RegularAndMerged) {
  auto g = build_grid(-4.0, 4.0, 801);
  const auto a = find_singularities(SampledFunction::sample(g, [](double x) { return x - 1.0; }));
  const auto b = find_singularities(SampledFunction::sample(g, [](double x) { return x + 2.0; }));
  EXPECT_TRUE(find_singularities(SampledFunction::constant(g, 1.0)).regular());
  const auto m = merge_singularities(a, b, *g);
  ASSERT_EQ(m.locations.size(), 2u);
  EXPECT_EQ(m.subdomains.size(), 3u);
  EXPECT_THROW(merge_singularities(a, b, *build_grid(-4.0, 4.0, 401)), std::invalid_argument);
}

TEST(Susy, ConstantMassPartnerIsShiftedOscillator) {
  const auto sys = build_ladder_system(constant_profile(1.0), 1.0, build_grid(-8.0, 8.0, 4001));
  const auto t = first_order_transform(sys, sys.psi0, 0.5);
  EXPECT_TRUE(t.singularities.regular());
  double e = 0.0;
  for (std::size_t i = 0; i < sys.grid->size(); ++i) {
    const double x = sys.grid->points()[i];
    e = std::max(e, std::abs(t.partner_potential[i] - (0.5 * x * x + 1.0)));
    EXPECT_NEAR(t.superpotential[i], x / std::sqrt(2.0), 2e-3);
  }
  EXPECT_LT(e, 1e-8);
  EXPECT_FALSE(missing_state_first(t).normalizable.front());
}

TEST_F(CosineFixture, FirstOrderClosedForms) {
  const auto t = first_order_transform(sys, tower[1].wavefunction, 1.5);
  ASSERT_EQ(t.singularities.locations.size(), 1u);
  EXPECT_NEAR(t.singularities.locations[0], 0.0, 1e-10);
  EXPECT_LT(t.seed_residual, 1e-6);
  const double hi = sys.grid->x_max();
  EXPECT_LT(max_rel(t.superpotential, [&](double x) { return ref.w1(x); }, 0.1, hi), 1e-3);
  EXPECT_LT(max_rel(t.partner_potential, [&](double x) { return ref.v1(x); }, 0.1, hi), 5e-3);
  EXPECT_LT(max_rel(t.partner_potential_riccati, [&](double x) { return ref.v1(x); }, 0.1, hi), 5e-3);
}

TEST_F(CosineFixture, SecondOrderClosedForms) {
  const auto t = second_order_nonconfluent(sys, tower[1].wavefunction, 1.5, tower[2].wavefunction, 2.5);
  EXPECT_TRUE(t.singularities.regular());
  const double hi = sys.grid->x_max();
  EXPECT_LT(max_rel(t.superpotential2, [&](double x) { return ref.w2(x); }, 0.1, hi), 5e-3);
  EXPECT_LT(max_rel(t.partner_potential2, [&](double x) { return ref.v2(x); }, 0.1, hi), 5e-3);
  EXPECT_LT(max_rel(t.partner_potential2, [&](double x) { return ref.v2(x); }, -hi, hi), 5e-3);
}

TEST_F(CosineFixture, ClosedFormErrorsAreSecondOrder) {
  auto errors = [&](std::size_t n) {
    const auto s = build_ladder_system(cosine_profile(kM0), 1.0, build_grid(-8.0, 8.0, n));
    const auto tw = state_tower(s, 2);
    const auto t = second_order_nonconfluent(s, tw[1].wavefunction, 1.5, tw[2].wavefunction, 2.5);
    return std::vector<double>{
        max_rel(t.first.superpotential, [&](double x) { return ref.w1(x); }, 0.5, 7.5),
        max_rel(t.first.partner_potential, [&](double x) { return ref.v1(x); }, 0.5, 7.5),
        max_rel(t.superpotential2, [&](double x) { return ref.w2(x); }, 0.5, 7.5),
        max_rel(t.partner_potential2, [&](double x) { return ref.v2(x); }, 0.5, 7.5)};
  };
  const auto coarse = errors(2001), fine = errors(4001);
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    EXPECT_NEAR(observed_order(coarse[k], fine[k]), 2.0, 0.2) << k;
  }
}

TEST_F(CosineFixture, SecondOrderSpectrumHasGap) {
  const auto t = second_order_nonconfluent(sys, tower[1].wavefunction, 1.5, tower[2].wavefunction, 2.5);
  const auto& piece = t.singularities.subdomains.front();
  const auto rep = partner_spectrum(sys.profile, t.partner_potential2, piece, 4);
  const double expected[] = {0.5, 3.5, 4.5, 5.5};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(rep.eigenvalues[k], expected[k], 1e-3);
}

TEST_F(CosineFixture, MappedStatesAndKernel) {
  const auto t = first_order_transform(sys, tower[1].wavefunction, 1.5);
  EXPECT_TRUE(map_state_first(t, tower[1].wavefunction).null);
  const auto chi = map_state_first(t, tower[3].wavefunction);
  ASSERT_FALSE(chi.null);
  const auto h1 = hamiltonian(sys.profile, t.partner_potential);
  EXPECT_NEAR(rayleigh_quotient(h1, chi.state), 3.5, 1e-3);
  const auto missing = missing_state_first(t);
  EXPECT_LT(missing.residual, 5e-3);
  for (bool b : missing.normalizable) EXPECT_FALSE(b);

  const auto t2 = second_order_nonconfluent(sys, tower[1].wavefunction, 1.5, tower[2].wavefunction, 2.5);
  EXPECT_TRUE(map_state_second(t2, tower[1].wavefunction, 1.5).null);
  EXPECT_TRUE(map_state_second(t2, tower[2].wavefunction, 2.5).null);
  const auto chi0 = map_state_second(t2, tower[0].wavefunction, 0.5);
  ASSERT_FALSE(chi0.null);
  EXPECT_NEAR(rayleigh_quotient(hamiltonian(sys.profile, t2.partner_potential2), chi0.state), 0.5, 1e-3);
  EXPECT_THROW(missing_state_confluent(t2), WrongModeError);
}

TEST_F(CosineFixture, IntertwiningAndFactorization) {
  const auto t = first_order_transform(sys, tower[1].wavefunction, 1.5);
  const auto tests = interior_test_functions(sys.grid, 3, std::pair{1.0, 5.0});
  const auto h0 = hamiltonian(sys.profile, sys.potential);
  const auto h1 = hamiltonian(sys.profile, t.partner_potential);
  const auto a = intertwiner(sys.profile, t.superpotential);
  const auto ad = intertwiner_adjoint(sys.profile, t.superpotential);
  EXPECT_LT(intertwining_residual(h0, h1, a, tests), 5e-3);
  const Operator fact = [&](const SampledFunction& f) { return ad(a(f)) + 1.5 * f; };
  EXPECT_LT(operator_identity_residual(fact, h0, tests), 5e-3);
}

TEST_F(CosineFixture, PartnerLadderLowersMappedStates) {
  // Away from the pole, L1- chi_3 is proportional to the image of psi_2.
  const auto t = first_order_transform(sys, tower[1].wavefunction, 1.5);
  const auto chi3 = map_state_first(t, tower[3].wavefunction).state;
  const auto chi2 = map_state_first(t, tower[2].wavefunction).state;
  const auto down = partner_ladder_apply(t, sys, chi3, Direction::down);
  double dd = 0.0, dc = 0.0, cc = 0.0;
  for (std::size_t i = 0; i < down.size(); ++i) {
    if (down.x(i) < 0.3 || down.x(i) > 6.0) continue;
    dd += down[i] * down[i];
    dc += down[i] * chi2[i];
    cc += chi2[i] * chi2[i];
  }
  EXPECT_GT(dc / std::sqrt(dd * cc), 1.0 - 1e-5);
}

TEST_F(CosineFixture, SeedValidation) {
  EXPECT_THROW(first_order_transform(sys, tower[1].wavefunction, 1.7), InvalidSeedError);
  EXPECT_THROW(second_order_nonconfluent(sys, tower[1].wavefunction, 1.5, tower[1].wavefunction, 1.5),
               WrongModeError);
}

TEST_F(CosineFixture, ConfluentIdentityAndThreshold) {
  const auto u = tower[1].bare();
  const auto t0 = confluent_transform(sys, u, 1.5, 0.0);
  double e = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) e = std::max(e, std::abs(t0.partner_potential2[i] - sys.potential[i]));
  EXPECT_LT(e, 1e-12);

  const auto crit = critical_d(u);
  EXPECT_NEAR(crit.d, 0.360691, 1e-3);
  EXPECT_TRUE(confluent_transform(sys, u, 1.5, crit.d - 0.05).singularities.regular());
  EXPECT_EQ(confluent_transform(sys, u, 1.5, crit.d + 0.05).singularities.locations.size(), 1u);
  EXPECT_THROW(missing_state_second(t0), WrongModeError);
}
