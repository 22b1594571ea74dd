#include "pdmsusy/ladder.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pdmsusy/bdd_solver.hpp"
#include "pdmsusy/errors.hpp"

namespace pdmsusy {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

}  // namespace

LadderSystem build_ladder_system(const MassProfile& profile, double delta_e, GridPtr grid,
                                 std::optional<double> a_opt, double hbar,
                                 std::optional<double> anchor_opt) {
  if (!(delta_e > 0.0)) throw std::invalid_argument("build_ladder_system: delta_e must be > 0");
  if (!(hbar > 0.0)) throw std::invalid_argument("build_ladder_system: hbar must be > 0");
  const double a = a_opt.value_or(hbar);
  if (a == 0.0 || !std::isfinite(a)) {
    throw std::invalid_argument("build_ladder_system: a must be finite and non-zero");
  }
  const Grid& g = *grid;
  profile.require_grid(g, "build_ladder_system");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(profile.m(g[i]) > 0.0)) {
      throw std::domain_error("build_ladder_system: mass vanishes inside the grid");
    }
  }
  double anchor;
  if (anchor_opt) {
    anchor = *anchor_opt;
    if (!profile.domain().closure_contains(anchor)) {
      throw std::invalid_argument("build_ladder_system: anchor outside the profile domain");
    }
  } else {
    anchor = profile.domain().closure_contains(0.0) ? 0.0 : g.x_min();
  }

  auto sqrt_m = [&profile](double x) { return std::sqrt(profile.m(x)); };
  SampledFunction S = antiderivative(sqrt_m, grid, anchor);

  const std::size_t n = g.size();
  std::vector<double> al(n), al1(n), be(n), v(n), p0(n);
  const double h2 = hbar * hbar;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g[i];
    const double m = profile.m(x), m1 = profile.m1(x), m2 = profile.m2(x);
    const double gm = 1.0 / std::sqrt(m);                    // m^{-1/2}
    const double g1 = -0.5 * gm * m1 / m;                    // (m^{-1/2})'
    const double g2 = 0.75 * gm * m1 * m1 / (m * m) - 0.5 * gm * m2 / m;
    const double s = S[i];
    al[i] = a * gm;
    al1[i] = a * g1;
    be[i] = 0.5 * a * g1 + a * delta_e / h2 * s;
    v[i] = 0.5 * (delta_e / hbar) * (delta_e / hbar) * s * s - 0.125 * h2 * g1 * g1 -
           0.25 * h2 * g2 * gm;
    p0[i] = std::pow(m, 0.25) * std::exp(-0.5 * delta_e / h2 * s * s);
  }
  SampledFunction psi0(grid, std::move(p0));
  const double bare = l2_norm(psi0);
  if (!(bare > 0.0)) throw DegenerateFunctionError("build_ladder_system: psi0 underflows");
  psi0 *= 1.0 / bare;

  return LadderSystem{profile,
                      delta_e,
                      a,
                      hbar,
                      grid,
                      anchor,
                      SampledFunction(grid, std::move(al)),
                      SampledFunction(grid, std::move(al1)),
                      SampledFunction(grid, std::move(be)),
                      SampledFunction(grid, std::move(v)),
                      std::move(psi0),
                      bare,
                      0.5 * delta_e,
                      std::move(S)};
}

SampledFunction apply_lowering(const LadderSystem& sys, const SampledFunction& psi) {
  require_same_grid(sys.psi0, psi, "apply_lowering");
  return (sys.alpha1 * derivative(psi) + sys.beta1 * psi) * (1.0 / kSqrt2);
}

SampledFunction apply_raising(const LadderSystem& sys, const SampledFunction& psi) {
  require_same_grid(sys.psi0, psi, "apply_raising");
  return (-(sys.alpha1 * derivative(psi)) + (sys.beta1 - sys.alpha1_prime) * psi) *
         (1.0 / kSqrt2);
}

SampledFunction bdd_apply(const MassProfile& profile, const SampledFunction& potential,
                          const SampledFunction& psi, double hbar, Accuracy accuracy) {
  require_same_grid(potential, psi, "bdd_apply");
  const auto d1 = derivative(psi, 1, accuracy);
  const auto d2 = derivative(psi, 2, accuracy);
  const Grid& g = psi.grid();
  const double h2 = hbar * hbar;
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double m = profile.m(g[i]), m1 = profile.m1(g[i]);
    out[i] = -0.5 * h2 / m * d2[i] + 0.5 * h2 * m1 / (m * m) * d1[i] + potential[i] * psi[i];
  }
  return SampledFunction(psi.grid_ptr(), std::move(out));
}

SampledFunction bdd_apply(const LadderSystem& sys, const SampledFunction& psi,
                          Accuracy accuracy) {
  return bdd_apply(sys.profile, sys.potential, psi, sys.hbar, accuracy);
}

std::vector<FormalState> state_tower(const LadderSystem& sys, int n_max, double bc_tolerance) {
  if (n_max < 0) throw std::invalid_argument("nth_state: n must be non-negative");
  const double c = sys.commutator();
  const SampledFunction sigma =
      sys.antiderivative_sqrt_m * (kSqrt2 * sys.a * sys.delta_e / (sys.hbar * sys.hbar));
  const auto bc = BoundaryCondition::dirichlet();

  std::vector<FormalState> out;
  auto emit = [&](int k, const SampledFunction& f, double norm) {
    const auto check = check_boundary_condition(f, sys.profile, bc, bc_tolerance);
    out.push_back(FormalState{k, (k + 0.5) * sys.delta_e, f, check.satisfied, check.residual,
                              norm * std::pow(2.0, 0.5 * k)});
  };

  // norm_k is || (L+)^k psi0_bare ||.
  SampledFunction prev = SampledFunction::zeros(sys.grid);
  SampledFunction cur = sys.psi0;
  double norm_prev = 0.0, norm_cur = sys.psi0_bare_norm;
  emit(0, cur, norm_cur);
  for (int k = 0; k < n_max; ++k) {
    SampledFunction next = sigma * cur;
    if (k > 0) next -= prev * (k * c * norm_prev / norm_cur);
    const double t = l2_norm(next);
    if (!std::isfinite(t) || t > 1e150) {
      throw InstabilityError("nth_state: raising step " + std::to_string(k + 1) + " overflowed",
                             k + 1);
    }
    if (!(t > 0.0)) {
      throw InstabilityError("nth_state: raising step " + std::to_string(k + 1) + " vanished",
                             k + 1);
    }
    next *= 1.0 / t;
    prev = std::move(cur);
    cur = std::move(next);
    norm_prev = norm_cur;
    norm_cur *= t;
    if (!std::isfinite(norm_cur)) {
      throw InstabilityError("nth_state: norm overflow at step " + std::to_string(k + 1), k + 1);
    }
    emit(k + 1, cur, norm_cur);
  }
  return out;
}

FormalState nth_state(const LadderSystem& sys, int n, double bc_tolerance) {
  auto tower = state_tower(sys, n, bc_tolerance);
  return std::move(tower.back());
}

double commutator_residual(const LadderSystem& sys, const std::vector<SampledFunction>& tests) {
  if (tests.empty()) throw std::invalid_argument("commutator_residual: no test functions");
  const double c = sys.commutator();
  double worst = 0.0;
  for (const auto& f : tests) {
    const auto lr = apply_lowering(sys, apply_raising(sys, f));
    const auto rl = apply_raising(sys, apply_lowering(sys, f));
    worst = std::max(worst, interior_relative_norm(lr - rl - f * c, f));
  }
  return worst;
}

double hamiltonian_commutation_defect(const LadderSystem& sys, const SampledFunction& psi) {
  const auto up = apply_raising(sys, psi);
  const auto hu = bdd_apply(sys, up);
  const auto uh = apply_raising(sys, bdd_apply(sys, psi));
  return interior_relative_norm(hu - uh - up * sys.delta_e, up, 4);
}

double eigen_residual(const LadderSystem& sys, const SampledFunction& psi, double energy,
                      Accuracy accuracy) {
  return interior_relative_norm(bdd_apply(sys, psi, accuracy) - psi * energy, psi);
}

std::vector<SampledFunction> interior_test_functions(
    const GridPtr& grid, int count, std::optional<std::pair<double, double>> support) {
  const auto [lo, hi] = support.value_or(std::pair{grid->x_min(), grid->x_max()});
  const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
  std::vector<SampledFunction> out;
  for (int j = 0; j < count; ++j) {
    const double width = r * (0.9 - 0.1 * (j % 3));
    const double centre = c + 0.1 * r * (j - 0.5 * (count - 1));
    const double freq = j / width;
    out.push_back(SampledFunction::sample(grid, [=](double x) {
      const double t = (x - centre) / width;
      if (std::abs(t) >= 1.0) return 0.0;
      const double w = 1.0 - t * t;
      const double w2 = w * w;
      return w2 * w2 * w2 * std::cos(freq * (x - centre));
    }));
  }
  return out;
}

GridPtr auto_widen_grid(const MassProfile& profile, double delta_e, const GridRequest& request,
                        int n_max, std::optional<double> a, double hbar, double tail,
                        int max_steps) {
  double lo = request.x_min, hi = request.x_max;
  for (int step = 0; step <= max_steps; ++step) {
    GridPtr grid = build_grid(lo, hi, request.n_points);
    const auto sys = build_ladder_system(profile, delta_e, grid, a, hbar);
    const auto psi = nth_state(sys, n_max).wavefunction;
    const double peak = psi.max_abs();
    const bool left_ok = request.fix_left || std::abs(psi[0]) < tail * peak;
    const bool right_ok = request.fix_right || std::abs(psi[psi.size() - 1]) < tail * peak;
    if (left_ok && right_ok) return grid;
    const double grow = 0.1 * (hi - lo);
    if (!left_ok) lo -= grow;
    if (!right_ok) hi += grow;
    if (!profile.domain().contains(lo) || !profile.domain().contains(hi)) {
      throw std::domain_error("auto_widen_grid: widening left the profile domain");
    }
  }
  throw NumericalError("auto_widen_grid: tail criterion not met after widening");
}

}  // namespace pdmsusy
