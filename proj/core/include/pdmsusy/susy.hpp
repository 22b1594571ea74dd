#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "pdmsusy/bdd_solver.hpp"
#include "pdmsusy/ladder.hpp"
#include "pdmsusy/mass_profile.hpp"
#include "pdmsusy/numerics.hpp"

namespace pdmsusy {

/// Index range [first, last] of a grid free of masked points.
struct Subdomain {
  std::size_t first;
  std::size_t last;
  double x_lo;
  double x_hi;
};

/// Zeros of a denominator and the regular pieces of the grid between them.
struct SingularityReport {
  std::vector<double> locations;
  std::vector<std::size_t> zero_cells;  // grid index at or just left of each zero
  std::vector<Subdomain> subdomains;
  std::vector<bool> masked;             // per grid point
  std::size_t mask_radius = 3;

  bool regular() const noexcept { return locations.empty(); }
  /// Copy of f with masked points set to NaN.
  SampledFunction apply_mask(const SampledFunction& f) const;
};

/// Zeros are sign changes between samples (located by linear interpolation)
/// and samples that are exactly zero or non-finite. Points within
/// `mask_radius` cells of a zero are masked; unmasked runs of at least 16
/// points become subdomains.
SingularityReport find_singularities(const SampledFunction& denominator,
                                     std::size_t mask_radius = 3);

/// Union of two reports on the same grid, with subdomains recomputed.
SingularityReport merge_singularities(const SingularityReport& a, const SingularityReport& b,
                                      const Grid& grid);

struct TransformOptions {
  double hbar = 1.0;
  /// Seeds must satisfy ||(H0 - eps) u|| / ||u|| below this; infinity skips.
  double seed_tolerance = 1e-6;
  std::size_t mask_radius = 3;
};

/// Relative eigen-residual of a seed: the smaller of a fourth-order
/// pointwise evaluation and the flux-form discrete operator.
double seed_residual(const MassProfile& profile, const SampledFunction& v0,
                     const SampledFunction& u, double energy, double hbar = 1.0);

struct FirstOrderTransform {
  MassProfile profile;
  double hbar;
  double epsilon1;
  SampledFunction v0;
  SampledFunction seed;                      // u1
  SampledFunction superpotential;            // W1
  SampledFunction partner_potential;         // V1, log-derivative route
  SampledFunction partner_potential_riccati; // V1, superpotential route
  double route_discrepancy;                  // max |difference| at regular points
  double seed_residual;
  SingularityReport singularities;
};

/// -(hbar / sqrt(2m)) u'/u, masked at the zeros of u.
SampledFunction superpotential_from_seed(const SampledFunction& u1, const MassProfile& profile,
                                         double hbar = 1.0, std::size_t mask_radius = 3);

FirstOrderTransform first_order_transform(const MassProfile& profile, const SampledFunction& v0,
                                          const SampledFunction& u1, double epsilon1,
                                          const TransformOptions& options = {});
FirstOrderTransform first_order_transform(const LadderSystem& sys, const SampledFunction& u1,
                                          double epsilon1, const TransformOptions& options = {});

struct MappedState {
  SampledFunction state;
  bool null;  // the input lay in the kernel of the map
};

/// m^{-1/2} W(u1, psi) / u1, normalized on each regular subdomain.
MappedState map_state_first(const FirstOrderTransform& t, const SampledFunction& psi);

struct MissingState {
  SampledFunction state;
  double residual;                 // ||(H - eps) chi|| / ||chi|| at regular points
  std::vector<bool> normalizable;  // per subdomain
};

/// sqrt(m) / u1 on the regular subdomains.
MissingState missing_state_first(const FirstOrderTransform& t);

enum class SecondOrderMode { nonconfluent, confluent };

struct SecondOrderTransform {
  FirstOrderTransform first;
  SecondOrderMode mode;
  std::optional<SampledFunction> seed2;  // u2, non-confluent only
  double epsilon2;
  double d_parameter;                    // confluent only
  double anchor;                         // confluent only
  SampledFunction denominator;           // W(u1,u2), or w for the confluent case
  SampledFunction seed_second_step;      // v2
  SampledFunction superpotential2;       // W2
  SampledFunction partner_potential2;    // V2
  SingularityReport singularities;
};

SecondOrderTransform second_order_nonconfluent(const LadderSystem& sys, const SampledFunction& u1,
                                               double epsilon1, const SampledFunction& u2,
                                               double epsilon2,
                                               const TransformOptions& options = {});
SecondOrderTransform second_order_nonconfluent(const MassProfile& profile,
                                               const SampledFunction& v0,
                                               const SampledFunction& u1, double epsilon1,
                                               const SampledFunction& u2, double epsilon2,
                                               const TransformOptions& options = {});

/// w = (1 - d) + d integral_anchor^x u1^2. The scale of u1 matters: it fixes
/// the meaning of d. The anchor defaults to 0 when on the grid, else x_min.
SecondOrderTransform confluent_transform(const LadderSystem& sys, const SampledFunction& u1,
                                         double epsilon1, double d,
                                         std::optional<double> anchor = std::nullopt,
                                         const TransformOptions& options = {});
SecondOrderTransform confluent_transform(const MassProfile& profile, const SampledFunction& v0,
                                         const SampledFunction& u1, double epsilon1, double d,
                                         std::optional<double> anchor = std::nullopt,
                                         const TransformOptions& options = {});

/// chi for an H0 eigenfunction psi of energy E, normalized per subdomain.
/// Non-confluent: W(u1,u2,psi)/(m W(u1,u2)), evaluated in the reduced form
///   (2/hbar^2) [(e2 - e1) u2 W(u1,psi)/W(u1,u2) + (e1 - E) psi].
/// Confluent: (2/hbar^2)(e1 - E) psi - d u1 W(u1,psi)/(m w).
MappedState map_state_second(const SecondOrderTransform& t, const SampledFunction& psi,
                             double energy);

/// m u1 / W(u1, u2); WrongModeError in the confluent case.
MissingState missing_state_second(const SecondOrderTransform& t);
/// u1 / w; WrongModeError in the non-confluent case.
MissingState missing_state_confluent(const SecondOrderTransform& t);

struct CriticalD {
  double d;
  bool regular_everywhere;
};

/// Smallest d in [0, 1] for which w has a zero on the grid, refined by
/// bisection to 1e-6.
CriticalD critical_d(const SampledFunction& u1, std::optional<double> anchor = std::nullopt);

using Operator = std::function<SampledFunction(const SampledFunction&)>;

/// max over tests of ||H_b(A f) - A(H_a f)|| / ||A f|| on interior points.
double intertwining_residual(const Operator& h_a, const Operator& h_b, const Operator& a,
                             const std::vector<SampledFunction>& tests);

/// max over tests of ||(lhs - rhs) f|| / ||f|| on interior points.
double operator_identity_residual(const Operator& lhs, const Operator& rhs,
                                  const std::vector<SampledFunction>& tests);

/// BDD Hamiltonian with the given potential (masked values propagate).
Operator hamiltonian(const MassProfile& profile, const SampledFunction& potential,
                     double hbar = 1.0);

/// First-order intertwiner (hbar/sqrt(2m)) d/dx + W.
Operator intertwiner(const MassProfile& profile, const SampledFunction& w, double hbar = 1.0);
/// Its adjoint -(hbar/sqrt(2m)) d/dx + W + hbar m'/(2 sqrt2 m^{3/2}).
Operator intertwiner_adjoint(const MassProfile& profile, const SampledFunction& w,
                             double hbar = 1.0);

enum class Direction { up, down };

/// L1 = A1 L A1^dagger for a first-order partner.
SampledFunction partner_ladder_apply(const FirstOrderTransform& t, const LadderSystem& sys,
                                     const SampledFunction& psi, Direction direction);
/// L2 = (A2 A1) L (A1^dagger A2^dagger) for a second-order partner.
SampledFunction partner_ladder_apply(const SecondOrderTransform& t, const LadderSystem& sys,
                                     const SampledFunction& psi, Direction direction);

/// Oracle spectrum of a partner Hamiltonian on one regular subdomain,
/// Dirichlet at both ends of the piece.
SpectrumReport partner_spectrum(const MassProfile& profile, const SampledFunction& potential,
                                const Subdomain& piece, std::size_t k, double hbar = 1.0);

/// <psi, H psi> / <psi, psi> over regular points.
double rayleigh_quotient(const Operator& h, const SampledFunction& psi);

}  // namespace pdmsusy
