#include "pdmsusy/susy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pdmsusy/errors.hpp"

namespace pdmsusy {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSqrt2 = std::numbers::sqrt2;

// Pointwise analytic profile data on a grid.
struct ProfileSamples {
  SampledFunction m, m1, m2;
  SampledFunction inv_sqrt_m;      // g = m^{-1/2}
  SampledFunction inv_sqrt_m_pp;   // g''
};

ProfileSamples sample_profile(const MassProfile& profile, const GridPtr& grid) {
  ProfileSamples s{profile.sample_m(grid), profile.sample_m1(grid), profile.sample_m2(grid),
                   SampledFunction::zeros(grid), SampledFunction::zeros(grid)};
  for (std::size_t i = 0; i < s.m.size(); ++i) {
    const double m = s.m[i], m1 = s.m1[i], m2 = s.m2[i];
    const double g = 1.0 / std::sqrt(m);
    s.inv_sqrt_m[i] = g;
    s.inv_sqrt_m_pp[i] = 0.75 * g * m1 * m1 / (m * m) - 0.5 * g * m2 / m;
  }
  return s;
}

// (log|f|)' by differencing the logarithm.
SampledFunction log_derivative(const SampledFunction& f) {
  return derivative(f.map([](double v) { return std::log(std::abs(v)); }));
}

std::vector<Subdomain> regular_runs(const Grid& g, const std::vector<bool>& masked) {
  std::vector<Subdomain> out;
  const std::size_t n = masked.size();
  std::size_t k = 0;
  while (k < n) {
    if (masked[k]) {
      ++k;
      continue;
    }
    std::size_t j = k;
    while (j + 1 < n && !masked[j + 1]) ++j;
    if (j - k + 1 >= Grid::kMinPoints) out.push_back({k, j, g[k], g[j]});
    k = j + 1;
  }
  return out;
}

// NaN outside the report's subdomains.
SampledFunction restrict_to_subdomains(const SingularityReport& s, const SampledFunction& f) {
  std::vector<double> v(f.size(), kNaN);
  for (const auto& piece : s.subdomains) {
    for (std::size_t i = piece.first; i <= piece.last; ++i) v[i] = f[i];
  }
  return SampledFunction(f.grid_ptr(), std::move(v));
}

// Unit norm on each subdomain; first significant sample of each piece positive.
SampledFunction normalize_pieces(const SingularityReport& s, const SampledFunction& f) {
  SampledFunction out = restrict_to_subdomains(s, f);
  const double h = f.grid().spacing();
  for (const auto& piece : s.subdomains) {
    double norm2 = 0.0, peak = 0.0;
    for (std::size_t i = piece.first; i <= piece.last; ++i) {
      if (std::isfinite(out[i])) peak = std::max(peak, std::abs(out[i]));
      if (i > piece.first && std::isfinite(out[i]) && std::isfinite(out[i - 1])) {
        norm2 += 0.5 * h * (out[i] * out[i] + out[i - 1] * out[i - 1]);
      }
    }
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) continue;
    double sign = 1.0;
    for (std::size_t i = piece.first; i <= piece.last; ++i) {
      if (std::isfinite(out[i]) && std::abs(out[i]) > 1e-8 * peak) {
        sign = out[i] > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    const double scale = sign / std::sqrt(norm2);
    for (std::size_t i = piece.first; i <= piece.last; ++i) out[i] *= scale;
  }
  return out;
}

// Relative distance of psi from span(basis) by least squares over finite samples.
double distance_from_span(const SampledFunction& psi, const std::vector<SampledFunction>& basis) {
  const std::size_t k = basis.size();
  std::vector<std::vector<double>> gram(k, std::vector<double>(k));
  std::vector<double> rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    rhs[i] = inner_product(basis[i], psi);
    for (std::size_t j = 0; j < k; ++j) gram[i][j] = inner_product(basis[i], basis[j]);
  }
  std::vector<double> c(k, 0.0);
  if (k == 1) {
    c[0] = rhs[0] / gram[0][0];
  } else {
    const double det = gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0];
    if (det == 0.0) return 1.0;
    c[0] = (rhs[0] * gram[1][1] - rhs[1] * gram[0][1]) / det;
    c[1] = (gram[0][0] * rhs[1] - gram[1][0] * rhs[0]) / det;
  }
  SampledFunction r = psi;
  for (std::size_t i = 0; i < k; ++i) r -= basis[i] * c[i];
  const double norm = l2_norm(psi);
  return norm > 0.0 ? l2_norm(r) / norm : 0.0;
}

bool endpoint_decays(const SampledFunction& f, const Subdomain& piece) {
  double peak = 0.0;
  for (std::size_t i = piece.first; i <= piece.last; ++i) {
    if (std::isfinite(f[i])) peak = std::max(peak, std::abs(f[i]));
  }
  if (peak == 0.0) return false;
  const double ends = std::max(std::abs(f[piece.first]), std::abs(f[piece.last]));
  return std::isfinite(ends) && ends < 1e-4 * peak;
}

void validate_seed(const MassProfile& profile, const SampledFunction& v0,
                   const SampledFunction& u, double energy, const TransformOptions& options,
                   const char* which, double& residual) {
  if (u.max_abs() == 0.0) throw DegenerateFunctionError(std::string(which) + " is identically zero");
  residual = seed_residual(profile, v0, u, energy, options.hbar);
  if (!(residual <= options.seed_tolerance)) {
    throw InvalidSeedError(std::string(which) + " is not an eigenfunction of H0 at the stated "
                                                "energy (relative residual " +
                               std::to_string(residual) + ")",
                           residual);
  }
}

MissingState make_missing(const SingularityReport& s, const SampledFunction& raw,
                          const Operator& h, double energy) {
  if (s.subdomains.empty()) {
    throw NoRegularSubdomainError("missing state: no regular subdomain");
  }
  SampledFunction chi = normalize_pieces(s, raw);
  const auto hc = h(chi);
  MissingState out{chi, interior_relative_norm(hc - chi * energy, chi), {}};
  for (const auto& piece : s.subdomains) out.normalizable.push_back(endpoint_decays(chi, piece));
  return out;
}

}  // namespace

// Singularities -----------------------------------------------------------------

SampledFunction SingularityReport::apply_mask(const SampledFunction& f) const {
  std::vector<double> v(f.values().begin(), f.values().end());
  for (std::size_t i = 0; i < v.size() && i < masked.size(); ++i) {
    if (masked[i]) v[i] = kNaN;
  }
  return SampledFunction(f.grid_ptr(), std::move(v));
}

SingularityReport find_singularities(const SampledFunction& f, std::size_t radius) {
  const Grid& g = f.grid();
  const std::size_t n = f.size();
  SingularityReport rep;
  rep.mask_radius = radius;
  rep.masked.assign(n, false);
  auto mask_range = [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    lo = std::max<std::ptrdiff_t>(lo, 0);
    hi = std::min<std::ptrdiff_t>(hi, static_cast<std::ptrdiff_t>(n) - 1);
    for (std::ptrdiff_t i = lo; i <= hi; ++i) rep.masked[static_cast<std::size_t>(i)] = true;
  };
  const auto r = static_cast<std::ptrdiff_t>(radius);
  std::size_t i = 0;
  std::ptrdiff_t last_nonzero = -1;
  while (i < n) {
    const double v = f[i];
    if (v == 0.0 || !std::isfinite(v)) {
      std::size_t j = i;
      while (j + 1 < n && (f[j + 1] == 0.0 || !std::isfinite(f[j + 1]))) ++j;
      rep.locations.push_back(0.5 * (g[i] + g[j]));
      rep.zero_cells.push_back(i);
      mask_range(static_cast<std::ptrdiff_t>(i) - r, static_cast<std::ptrdiff_t>(j) + r);
      last_nonzero = -1;
      i = j + 1;
      continue;
    }
    if (last_nonzero >= 0 && static_cast<std::size_t>(last_nonzero) + 1 == i) {
      const double u = f[i - 1];
      if ((u > 0.0) != (v > 0.0)) {
        rep.locations.push_back(g[i - 1] - u * g.spacing() / (v - u));
        rep.zero_cells.push_back(i - 1);
        mask_range(static_cast<std::ptrdiff_t>(i) - r, static_cast<std::ptrdiff_t>(i) - 1 + r);
      }
    }
    last_nonzero = static_cast<std::ptrdiff_t>(i);
    ++i;
  }
  rep.subdomains = regular_runs(g, rep.masked);
  return rep;
}

SingularityReport merge_singularities(const SingularityReport& a, const SingularityReport& b,
                                      const Grid& grid) {
  if (a.masked.size() != b.masked.size() || a.masked.size() != grid.size()) {
    throw std::invalid_argument("merge_singularities: reports belong to different grids");
  }
  SingularityReport out = a;
  out.mask_radius = std::max(a.mask_radius, b.mask_radius);
  for (std::size_t i = 0; i < out.masked.size(); ++i) out.masked[i] = a.masked[i] || b.masked[i];
  out.locations.insert(out.locations.end(), b.locations.begin(), b.locations.end());
  out.zero_cells.insert(out.zero_cells.end(), b.zero_cells.begin(), b.zero_cells.end());
  std::sort(out.locations.begin(), out.locations.end());
  std::sort(out.zero_cells.begin(), out.zero_cells.end());
  out.subdomains = regular_runs(grid, out.masked);
  return out;
}

// First order -------------------------------------------------------------------

double seed_residual(const MassProfile& profile, const SampledFunction& v0,
                     const SampledFunction& u, double energy, double hbar) {
  require_same_grid(v0, u, "seed_residual");
  const double pointwise = interior_relative_norm(
      bdd_apply(profile, v0, u, hbar, Accuracy::fourth) - u * energy, u);
  double flux = std::numeric_limits<double>::infinity();
  bool finite_v0 = true;
  for (std::size_t i = 0; i < v0.size(); ++i) finite_v0 = finite_v0 && std::isfinite(v0[i]);
  if (finite_v0) {
    const auto op = discretize(profile, v0, BoundaryCondition::dirichlet(), hbar);
    flux = interior_relative_norm(op.apply(u) - u * energy, u);
  }
  return std::min(pointwise, flux);
}

SampledFunction superpotential_from_seed(const SampledFunction& u1, const MassProfile& profile,
                                         double hbar, std::size_t mask_radius) {
  if (u1.max_abs() == 0.0) throw DegenerateFunctionError("seed is identically zero");
  const auto sing = find_singularities(u1, mask_radius);
  const auto m = profile.sample_m(u1.grid_ptr());
  const auto lg = derivative(u1) / u1;
  std::vector<double> w(u1.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = -hbar / std::sqrt(2.0 * m[i]) * lg[i];
  return sing.apply_mask(SampledFunction(u1.grid_ptr(), std::move(w)));
}

FirstOrderTransform first_order_transform(const MassProfile& profile, const SampledFunction& v0,
                                          const SampledFunction& u1, double epsilon1,
                                          const TransformOptions& options) {
  require_same_grid(v0, u1, "first_order_transform");
  double residual = 0.0;
  validate_seed(profile, v0, u1, epsilon1, options, "seed u1", residual);
  const double hbar = options.hbar;
  const GridPtr& grid = u1.grid_ptr();
  const auto p = sample_profile(profile, grid);
  const auto sing = find_singularities(u1, options.mask_radius);

  const auto w1 = superpotential_from_seed(u1, profile, hbar, options.mask_radius);
  // [log(m^{-1/4} u1)]' = u1'/u1 - m'/(4m)
  const auto q = sing.apply_mask(p.inv_sqrt_m * (log_derivative(u1) - p.m1 / p.m * 0.25));
  const auto v1 = sing.apply_mask(v0 - p.inv_sqrt_m * derivative(q) * (hbar * hbar));
  const auto v1r = sing.apply_mask(v0 + p.inv_sqrt_m * derivative(w1) * (2.0 * hbar / kSqrt2) -
                                   p.inv_sqrt_m * p.inv_sqrt_m_pp * (0.5 * hbar * hbar));

  double disc = 0.0;
  for (std::size_t i = 2; i + 2 < v1.size(); ++i) {
    if (!std::isfinite(v1[i]) || !std::isfinite(v1r[i])) continue;
    disc = std::max(disc, std::abs(v1[i] - v1r[i]) / std::max(1.0, std::abs(v1[i])));
  }
  return FirstOrderTransform{profile, hbar, epsilon1, v0, u1, w1, v1, v1r, disc, residual, sing};
}

FirstOrderTransform first_order_transform(const LadderSystem& sys, const SampledFunction& u1,
                                          double epsilon1, const TransformOptions& options) {
  TransformOptions o = options;
  o.hbar = sys.hbar;
  return first_order_transform(sys.profile, sys.potential, u1, epsilon1, o);
}

MappedState map_state_first(const FirstOrderTransform& t, const SampledFunction& psi) {
  require_same_grid(t.seed, psi, "map_state_first");
  if (distance_from_span(psi, {t.seed}) < 1e-8) {
    return {SampledFunction::zeros(psi.grid_ptr()), true};
  }
  const auto m = t.profile.sample_m(psi.grid_ptr());
  const auto raw = wronskian(t.seed, psi) / t.seed;
  std::vector<double> v(raw.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = raw[i] / std::sqrt(m[i]);
  const SampledFunction phi(psi.grid_ptr(), std::move(v));
  return {normalize_pieces(t.singularities, t.singularities.apply_mask(phi)), false};
}

MissingState missing_state_first(const FirstOrderTransform& t) {
  const auto m = t.profile.sample_m(t.seed.grid_ptr());
  const auto raw = t.singularities.apply_mask(m.map([](double v) { return std::sqrt(v); }) / t.seed);
  return make_missing(t.singularities, raw, hamiltonian(t.profile, t.partner_potential, t.hbar),
                      t.epsilon1);
}

// Second order ------------------------------------------------------------------

SecondOrderTransform second_order_nonconfluent(const MassProfile& profile,
                                               const SampledFunction& v0,
                                               const SampledFunction& u1, double epsilon1,
                                               const SampledFunction& u2, double epsilon2,
                                               const TransformOptions& options) {
  if (epsilon1 == epsilon2) {
    throw WrongModeError(
        "second_order_nonconfluent: equal factorization energies; use confluent_transform");
  }
  require_same_grid(u1, u2, "second_order_nonconfluent");
  auto first = first_order_transform(profile, v0, u1, epsilon1, options);
  double residual2 = 0.0;
  validate_seed(profile, v0, u2, epsilon2, options, "seed u2", residual2);

  const double hbar = options.hbar;
  const GridPtr& grid = u1.grid_ptr();
  const auto p = sample_profile(profile, grid);
  const auto w12 = wronskian(u1, u2);
  if (w12.max_abs() < 1e-8 * u1.max_abs() * u2.max_abs()) {
    throw DegenerateWronskianError("second_order_nonconfluent: seeds are linearly dependent");
  }
  const auto sing = find_singularities(w12, options.mask_radius);
  const auto all = merge_singularities(sing, first.singularities, *grid);

  // W' = (m'/m) W + (2m/hbar^2)(e1 - e2) u1 u2
  const auto ratio = u1 * u2 / w12;
  const auto lw = p.m1 / p.m + p.m * ratio * (2.0 * (epsilon1 - epsilon2) / (hbar * hbar));
  const auto q = sing.apply_mask(p.inv_sqrt_m * (lw - p.m1 / p.m));
  const auto v2 = sing.apply_mask(v0 - p.inv_sqrt_m * derivative(q) * (hbar * hbar));
  const auto seed2 = all.apply_mask(p.inv_sqrt_m * w12 / u1);
  const auto lu = derivative(u1) / u1;
  std::vector<double> sp(grid->size());
  for (std::size_t i = 0; i < sp.size(); ++i) {
    sp[i] = -hbar / std::sqrt(2.0 * p.m[i]) * (lw[i] - 0.5 * p.m1[i] / p.m[i] - lu[i]);
  }
  const auto w2 = all.apply_mask(SampledFunction(grid, std::move(sp)));
  return SecondOrderTransform{std::move(first), SecondOrderMode::nonconfluent, u2, epsilon2, 0.0,
                              0.0, w12, seed2, w2, v2, sing};
}

SecondOrderTransform second_order_nonconfluent(const LadderSystem& sys, const SampledFunction& u1,
                                               double epsilon1, const SampledFunction& u2,
                                               double epsilon2, const TransformOptions& options) {
  TransformOptions o = options;
  o.hbar = sys.hbar;
  return second_order_nonconfluent(sys.profile, sys.potential, u1, epsilon1, u2, epsilon2, o);
}

SecondOrderTransform confluent_transform(const MassProfile& profile, const SampledFunction& v0,
                                         const SampledFunction& u1, double epsilon1, double d,
                                         std::optional<double> anchor_opt,
                                         const TransformOptions& options) {
  if (!(d >= 0.0 && d <= 1.0)) {
    throw std::invalid_argument("confluent_transform: d must lie in [0, 1]");
  }
  auto first = first_order_transform(profile, v0, u1, epsilon1, options);
  const double hbar = options.hbar;
  const GridPtr& grid = u1.grid_ptr();
  const double anchor = anchor_opt.value_or(default_anchor(*grid));
  const auto p = sample_profile(profile, grid);
  const auto u1sq = u1 * u1;
  const auto integral = integrate_cumulative(u1sq, anchor);
  const auto w = integral.map([d](double v) { return (1.0 - d) + d * v; });
  const auto sing = find_singularities(w, options.mask_radius);
  const auto all = merge_singularities(sing, first.singularities, *grid);

  // [log w]' = d u1^2 / w
  const auto lw = u1sq * d / w;
  const auto v2 =
      sing.apply_mask(v0 - p.inv_sqrt_m * derivative(p.inv_sqrt_m * lw) * (hbar * hbar));
  const auto seed2 = all.apply_mask(p.m.map([](double v) { return std::sqrt(v); }) * w / u1);
  const auto lu = derivative(u1) / u1;
  std::vector<double> sp(grid->size());
  for (std::size_t i = 0; i < sp.size(); ++i) {
    sp[i] = -hbar / std::sqrt(2.0 * p.m[i]) * (0.5 * p.m1[i] / p.m[i] - lu[i] + lw[i]);
  }
  const auto w2 = all.apply_mask(SampledFunction(grid, std::move(sp)));
  return SecondOrderTransform{std::move(first), SecondOrderMode::confluent, std::nullopt,
                              epsilon1, d, anchor, w, seed2, w2, v2, sing};
}

SecondOrderTransform confluent_transform(const LadderSystem& sys, const SampledFunction& u1,
                                         double epsilon1, double d, std::optional<double> anchor,
                                         const TransformOptions& options) {
  TransformOptions o = options;
  o.hbar = sys.hbar;
  return confluent_transform(sys.profile, sys.potential, u1, epsilon1, d, anchor, o);
}

MappedState map_state_second(const SecondOrderTransform& t, const SampledFunction& psi,
                             double energy) {
  const auto& u1 = t.first.seed;
  require_same_grid(u1, psi, "map_state_second");
  const double hbar = t.first.hbar;
  const double e1 = t.first.epsilon1;
  std::vector<SampledFunction> kernel{u1};
  if (t.mode == SecondOrderMode::nonconfluent) kernel.push_back(*t.seed2);
  if (distance_from_span(psi, kernel) < 1e-8) {
    return {SampledFunction::zeros(psi.grid_ptr()), true};
  }
  const auto w1psi = wronskian(u1, psi);
  SampledFunction chi = psi * (2.0 / (hbar * hbar) * (e1 - energy));
  if (t.mode == SecondOrderMode::nonconfluent) {
    chi += *t.seed2 * w1psi / t.denominator * (2.0 / (hbar * hbar) * (t.epsilon2 - e1));
  } else {
    const auto m = t.first.profile.sample_m(psi.grid_ptr());
    chi -= u1 * w1psi / (m * t.denominator) * t.d_parameter;
  }
  return {normalize_pieces(t.singularities, t.singularities.apply_mask(chi)), false};
}

MissingState missing_state_second(const SecondOrderTransform& t) {
  if (t.mode != SecondOrderMode::nonconfluent) {
    throw WrongModeError("missing_state_second: transform is confluent");
  }
  const auto m = t.first.profile.sample_m(t.first.seed.grid_ptr());
  const auto raw = t.singularities.apply_mask(m * t.first.seed / t.denominator);
  return make_missing(t.singularities, raw,
                      hamiltonian(t.first.profile, t.partner_potential2, t.first.hbar),
                      t.epsilon2);
}

MissingState missing_state_confluent(const SecondOrderTransform& t) {
  if (t.mode != SecondOrderMode::confluent) {
    throw WrongModeError("missing_state_confluent: transform is non-confluent");
  }
  const auto raw = t.singularities.apply_mask(t.first.seed / t.denominator);
  return make_missing(t.singularities, raw,
                      hamiltonian(t.first.profile, t.partner_potential2, t.first.hbar),
                      t.epsilon2);
}

CriticalD critical_d(const SampledFunction& u1, std::optional<double> anchor) {
  const auto integral = integrate_cumulative(u1 * u1, anchor.value_or(default_anchor(u1.grid())));
  double imin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < integral.size(); ++i) imin = std::min(imin, integral[i]);
  // w(x; d) = 1 - d + d I(x) vanishes somewhere in the open domain.
  auto singular = [imin](double d) { return 1.0 - d + d * imin <= 0.0; };
  if (!singular(1.0)) return {1.0, true};
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    (singular(mid) ? hi : lo) = mid;
  }
  return {0.5 * (lo + hi), false};
}

// Operators ---------------------------------------------------------------------

Operator hamiltonian(const MassProfile& profile, const SampledFunction& potential, double hbar) {
  return [profile, potential, hbar](const SampledFunction& f) {
    return bdd_apply(profile, potential, f, hbar);
  };
}

Operator intertwiner(const MassProfile& profile, const SampledFunction& w, double hbar) {
  const auto coeff = profile.sample_m(w.grid_ptr()).map(
      [hbar](double m) { return hbar / std::sqrt(2.0 * m); });
  return [coeff, w](const SampledFunction& f) { return coeff * derivative(f) + w * f; };
}

Operator intertwiner_adjoint(const MassProfile& profile, const SampledFunction& w, double hbar) {
  const GridPtr& grid = w.grid_ptr();
  const auto m = profile.sample_m(grid);
  const auto m1 = profile.sample_m1(grid);
  const auto coeff = m.map([hbar](double v) { return hbar / std::sqrt(2.0 * v); });
  std::vector<double> extra(m.size());
  for (std::size_t i = 0; i < extra.size(); ++i) {
    extra[i] = hbar * m1[i] / (2.0 * kSqrt2 * std::pow(m[i], 1.5));
  }
  const auto mult = w + SampledFunction(grid, std::move(extra));
  return [coeff, mult](const SampledFunction& f) { return mult * f - coeff * derivative(f); };
}

double intertwining_residual(const Operator& h_a, const Operator& h_b, const Operator& a,
                             const std::vector<SampledFunction>& tests) {
  if (tests.empty()) throw std::invalid_argument("intertwining_residual: no test functions");
  double worst = 0.0;
  for (const auto& f : tests) {
    const auto af = a(f);
    worst = std::max(worst, interior_relative_norm(h_b(af) - a(h_a(f)), af, 4));
  }
  return worst;
}

double operator_identity_residual(const Operator& lhs, const Operator& rhs,
                                  const std::vector<SampledFunction>& tests) {
  if (tests.empty()) throw std::invalid_argument("operator_identity_residual: no test functions");
  double worst = 0.0;
  for (const auto& f : tests) {
    worst = std::max(worst, interior_relative_norm(lhs(f) - rhs(f), f, 4));
  }
  return worst;
}

SampledFunction partner_ladder_apply(const FirstOrderTransform& t, const LadderSystem& sys,
                                     const SampledFunction& psi, Direction direction) {
  const auto a1 = intertwiner(t.profile, t.superpotential, t.hbar);
  const auto a1d = intertwiner_adjoint(t.profile, t.superpotential, t.hbar);
  const auto down = a1d(psi);
  const auto moved =
      direction == Direction::up ? apply_raising(sys, down) : apply_lowering(sys, down);
  return t.singularities.apply_mask(a1(moved));
}

SampledFunction partner_ladder_apply(const SecondOrderTransform& t, const LadderSystem& sys,
                                     const SampledFunction& psi, Direction direction) {
  const auto& f = t.first;
  const auto a1 = intertwiner(f.profile, f.superpotential, f.hbar);
  const auto a1d = intertwiner_adjoint(f.profile, f.superpotential, f.hbar);
  const auto a2 = intertwiner(f.profile, t.superpotential2, f.hbar);
  const auto a2d = intertwiner_adjoint(f.profile, t.superpotential2, f.hbar);
  const auto down = a1d(a2d(psi));
  const auto moved =
      direction == Direction::up ? apply_raising(sys, down) : apply_lowering(sys, down);
  return t.singularities.apply_mask(a2(a1(moved)));
}

SpectrumReport partner_spectrum(const MassProfile& profile, const SampledFunction& potential,
                                const Subdomain& piece, std::size_t k, double hbar) {
  // Derivatives widen the masked region; trim non-finite samples at the ends.
  std::size_t first = piece.first, last = piece.last;
  while (first < last && !std::isfinite(potential[first])) ++first;
  while (last > first && !std::isfinite(potential[last])) --last;
  auto sub = potential.grid().slice(first, last);
  const auto v = potential.restricted(sub, first);
  const auto op = discretize(profile, v, BoundaryCondition::dirichlet(), hbar);
  return solve_spectrum(op, k, profile);
}

double rayleigh_quotient(const Operator& h, const SampledFunction& psi) {
  const auto hp = h(psi);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i + 1 < psi.size(); ++i) {
    if (!std::isfinite(psi[i]) || !std::isfinite(hp[i])) continue;
    num += psi[i] * hp[i];
    den += psi[i] * psi[i];
  }
  return num / den;
}

}  // namespace pdmsusy
