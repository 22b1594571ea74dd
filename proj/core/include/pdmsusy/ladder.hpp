#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "pdmsusy/mass_profile.hpp"
#include "pdmsusy/numerics.hpp"

namespace pdmsusy {

/// A BDD Hamiltonian with first-order ladder operators
///   L- = (alpha1 d/dx + beta1)/sqrt2,  L+ = (-alpha1 d/dx + beta1 - alpha1')/sqrt2,
/// built from a mass profile and a level spacing.
struct LadderSystem {
  MassProfile profile;
  double delta_e;
  double a;
  double hbar;
  GridPtr grid;
  double anchor;                         // S(anchor) = 0
  SampledFunction alpha1;                // a m^{-1/2}
  SampledFunction alpha1_prime;          // analytic
  SampledFunction beta1;
  SampledFunction potential;             // V
  SampledFunction psi0;                  // unit norm
  double psi0_bare_norm;                 // norm of m^{1/4} exp(-delta_e S^2 / 2hbar^2)
  double e0;                             // delta_e / 2
  SampledFunction antiderivative_sqrt_m; // S

  /// [L-, L+] = a^2 delta_e / hbar^2.
  double commutator() const noexcept { return a * a * delta_e / (hbar * hbar); }
};

/// Builds the ladder system on `grid`. `a` defaults to hbar and the
/// antiderivative anchor to 0 when 0 lies in the closure of the profile
/// domain, otherwise to x_min.
LadderSystem build_ladder_system(const MassProfile& profile, double delta_e, GridPtr grid,
                                 std::optional<double> a = std::nullopt, double hbar = 1.0,
                                 std::optional<double> anchor = std::nullopt);

SampledFunction apply_lowering(const LadderSystem& sys, const SampledFunction& psi);
SampledFunction apply_raising(const LadderSystem& sys, const SampledFunction& psi);

/// -(hbar^2/2m) psi'' + (hbar^2 m'/2m^2) psi' + V psi with analytic m.
SampledFunction bdd_apply(const MassProfile& profile, const SampledFunction& potential,
                          const SampledFunction& psi, double hbar = 1.0,
                          Accuracy accuracy = Accuracy::second);
SampledFunction bdd_apply(const LadderSystem& sys, const SampledFunction& psi,
                          Accuracy accuracy = Accuracy::second);

struct FormalState {
  int index;
  double energy;
  SampledFunction wavefunction;  // unit norm
  bool satisfies_bc;
  double bc_residual;
  /// Norm of (sqrt2 L+)^n psi0 with the unnormalized extremal state.
  double bare_norm;

  /// (sqrt2 L+)^n psi0 at its natural scale.
  SampledFunction bare() const { return wavefunction * bare_norm; }
};

/// psi_n proportional to (L+)^n psi0.
///
/// Uses L+ = sigma - L-, with sigma = sqrt2 a delta_e S / hbar^2 a
/// multiplication operator, and L- (L+)^k psi0 = k c (L+)^{k-1} psi0, so
/// no derivatives of sampled data are taken. Each step is renormalized; a
/// step whose growth factor is non-finite or above 1e150 raises
/// InstabilityError.
FormalState nth_state(const LadderSystem& sys, int n, double bc_tolerance = 1e-4);

/// psi_0 .. psi_{n_max}.
std::vector<FormalState> state_tower(const LadderSystem& sys, int n_max,
                                     double bc_tolerance = 1e-4);

/// max over tests of ||[L-, L+] f - c f|| / ||f|| on interior points.
double commutator_residual(const LadderSystem& sys, const std::vector<SampledFunction>& tests);

/// ||(H L+ - L+ H) psi - delta_e L+ psi|| / ||L+ psi|| on interior points.
double hamiltonian_commutation_defect(const LadderSystem& sys, const SampledFunction& psi);

/// ||(H - E) psi|| / ||psi|| on interior points.
double eigen_residual(const LadderSystem& sys, const SampledFunction& psi, double energy,
                      Accuracy accuracy = Accuracy::second);

/// Windows (1-t^2)^6 with oscillating variants, supported inside [lo, hi]
/// (default: the whole grid).
std::vector<SampledFunction> interior_test_functions(
    const GridPtr& grid, int count = 3,
    std::optional<std::pair<double, double>> support = std::nullopt);

struct GridRequest {
  double x_min;
  double x_max;
  std::size_t n_points;
  bool fix_left = false;   // keep x_min (e.g. the cut near a mass zero)
  bool fix_right = false;
};

/// Widens each free end by 10% of the width until |psi_{n_max}| there is
/// below `tail` times its maximum. The point count is kept.
GridPtr auto_widen_grid(const MassProfile& profile, double delta_e, const GridRequest& request,
                        int n_max, std::optional<double> a = std::nullopt, double hbar = 1.0,
                        double tail = 1e-10, int max_steps = 40);

}  // namespace pdmsusy
