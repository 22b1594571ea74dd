#include "pdmsusy/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

#include "pdmsusy/commands.hpp"

namespace pdmsusy::app {

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

json VerifyReport::to_json() const {
  json list = json::array();
  for (const auto& c : checks) {
    json item{{"check", c.check},
              {"residual", number(c.residual)},
              {"tolerance", c.tolerance},
              {"pass", c.pass}};
    if (!c.detail.empty()) item["detail"] = c.detail;
    list.push_back(item);
  }
  return {{"checks", list}, {"passed", passed()}};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class T>
class Lazy {
 public:
  explicit Lazy(std::function<T()> make) : make_(std::move(make)) {}

  const T& get() {
    if (value_) return *value_;
    if (!error_.empty()) throw std::runtime_error(error_);
    try {
      value_.emplace(make_());
    } catch (const std::exception& e) {
      error_ = e.what();
      throw;
    }
    return *value_;
  }

 private:
  std::function<T()> make_;
  std::optional<T> value_;
  std::string error_;
};

class Suite {
 public:
  void run(const std::string& name, double tolerance, const std::function<double()>& f) {
    CheckResult r{name, kNaN, tolerance, false, {}};
    try {
      r.residual = f();
      r.pass = std::isfinite(r.residual) && r.residual <= tolerance;
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    report.checks.push_back(std::move(r));
  }

  VerifyReport report;
};

/// Point counts n, n/2, n/4 on the same bounds.
std::vector<std::size_t> refinement_counts(std::size_t n) {
  const std::size_t n2 = (n - 1) / 2 + 1;
  const std::size_t n4 = (n2 - 1) / 2 + 1;
  if (n4 < Grid::kMinPoints) throw std::runtime_error("grid too coarse for a refinement study");
  return {n, n2, n4};
}

/// Largest deviation of the observed order from 2 over successive pairs.
double order_deviation(const std::vector<double>& err, const std::vector<double>& h) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < err.size(); ++i) {
    if (!(err[i] > 0.0) || !(err[i + 1] > 0.0)) return kNaN;
    const double p = std::log(err[i + 1] / err[i]) / std::log(h[i + 1] / h[i]);
    worst = std::max(worst, std::abs(p - 2.0));
  }
  return worst;
}

double interp(const SampledFunction& f, double x) {
  const auto& g = f.grid();
  if (x <= g.x_min()) return f[0];
  if (x >= g.x_max()) return f[f.size() - 1];
  const double s = (x - g.x_min()) / g.spacing();
  const auto i = std::min(static_cast<std::size_t>(s), f.size() - 2);
  const double t = s - static_cast<double>(i);
  return (1.0 - t) * f[i] + t * f[i + 1];
}

/// (4/3) max |f_h - f_2h| / max(1, |f_h|) at coarse points away from the
/// ends where both are finite.
double richardson_tolerance(const SampledFunction& fine, const SampledFunction& coarse,
                            std::size_t margin = 3) {
  double worst = 0.0;
  const auto& g = coarse.grid();
  for (std::size_t i = margin; i + margin < g.size(); ++i) {
    const double a = interp(fine, g[i]);
    const double b = coarse[i];
    if (!std::isfinite(a) || !std::isfinite(b)) continue;
    // Skip points next to a masked sample on either grid.
    if (!std::isfinite(coarse[i - 1]) || !std::isfinite(coarse[i + 1])) continue;
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  return 4.0 / 3.0 * worst;
}

/// max |a - b| / max(1, |b|) where both are finite, `margin` cells from the ends.
double relative_discrepancy(const SampledFunction& a, const SampledFunction& b,
                            std::size_t margin = 3) {
  double worst = 0.0;
  for (std::size_t i = margin; i + margin < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) continue;
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  }
  return worst;
}

std::pair<double, double> middle_of_largest(const SingularityReport& r) {
  if (r.subdomains.empty()) throw NoRegularSubdomainError("no regular subdomain for test functions");
  const auto it = std::max_element(r.subdomains.begin(), r.subdomains.end(),
                                   [](const Subdomain& a, const Subdomain& b) {
                                     return a.x_hi - a.x_lo < b.x_hi - b.x_lo;
                                   });
  const double w = it->x_hi - it->x_lo;
  return {it->x_lo + 0.25 * w, it->x_hi - 0.25 * w};
}

std::pair<double, double> middle_of_grid(const Grid& g) {
  const double w = g.x_max() - g.x_min();
  return {g.x_min() + 0.25 * w, g.x_max() - 0.25 * w};
}

struct SecondStep {
  SecondOrderTransform transform;
  SingularityReport combined;  // poles of both steps
};

}  // namespace

VerifyReport run_verify(const RunConfig& c) {
  Suite suite;
  const std::size_t levels = static_cast<std::size_t>(c.levels);
  const int n_max = std::max({c.states - 1, c.seed, c.seed2, c.levels - 1});
  const TransformOptions strict{c.hbar, c.tol.seed, 3};
  const TransformOptions loose{c.hbar, kInf, 3};

  Lazy<Setup> setup([&] { return make_setup(c, n_max); });
  Lazy<std::vector<std::size_t>> counts([&] { return refinement_counts(c.n_points); });
  // Ladder systems on the refinement grids.
  Lazy<std::vector<LadderSystem>> ladders([&] {
    const auto& s = setup.get();
    std::vector<LadderSystem> out{s.sys};
    const auto& n = counts.get();
    for (std::size_t i = 1; i < n.size(); ++i) out.push_back(system_on(c, s.profile, s.request, n[i]));
    return out;
  });
  auto spacings = [&] {
    std::vector<double> h;
    for (const auto& l : ladders.get()) h.push_back(l.grid->spacing());
    return h;
  };

  // Ladder algebra ---------------------------------------------------------
  suite.run("ladder.annihilation", c.tol.annihilation, [&] {
    const auto& sys = setup.get().sys;
    return interior_relative_norm(apply_lowering(sys, sys.psi0), sys.psi0);
  });
  suite.run("ladder.commutator", c.tol.commutator, [&] {
    const auto& sys = setup.get().sys;
    return commutator_residual(sys, interior_test_functions(sys.grid, 3, middle_of_grid(*sys.grid)));
  });
  suite.run("ladder.commutator_order", c.tol.order_slack, [&] {
    const auto support = middle_of_grid(*setup.get().sys.grid);
    std::vector<double> err;
    for (const auto& l : ladders.get()) {
      err.push_back(commutator_residual(l, interior_test_functions(l.grid, 3, support)));
    }
    return order_deviation(err, spacings());
  });
  suite.run("ladder.hamiltonian_commutation", c.tol.intertwining, [&] {
    const auto& sys = setup.get().sys;
    double worst = 0.0;
    for (const auto& f : interior_test_functions(sys.grid, 3, middle_of_grid(*sys.grid))) {
      worst = std::max(worst, hamiltonian_commutation_defect(sys, f));
    }
    return worst;
  });
  suite.run("ladder.eigen_residual", c.tol.residual, [&] {
    const auto& s = setup.get();
    double worst = 0.0;
    for (const auto& st : s.states) {
      if (st.satisfies_bc) {
        worst = std::max(worst, eigen_residual(s.sys, st.wavefunction, st.energy, Accuracy::fourth));
      }
    }
    return worst;
  });

  // Oracle solver ----------------------------------------------------------
  Lazy<std::vector<SpectrumReport>> spectra([&] {
    std::vector<SpectrumReport> out;
    for (const auto& l : ladders.get()) out.push_back(oracle_spectrum(l, levels));
    return out;
  });
  suite.run("oracle.equivalence", c.tol.eigenvalue, [&] {
    const auto& s = setup.get();
    std::vector<double> reference;
    for (const auto& st : state_tower(s.sys, 2 * c.levels - 1, c.tol.bc)) {
      if (st.satisfies_bc && reference.size() < levels) reference.push_back(st.energy);
    }
    if (reference.size() < levels) throw std::runtime_error("too few boundary-satisfying ladder levels");
    const auto& rep = spectra.get().front();
    double worst = 0.0;
    for (std::size_t k = 0; k < levels; ++k) {
      worst = std::max(worst, std::abs(rep.eigenvalues[k] - reference[k]));
    }
    return worst;
  });
  suite.run("oracle.convergence_order", c.tol.order_slack, [&] {
    const auto& sp = spectra.get();
    const auto h = spacings();
    // Self-convergence: successive differences shrink by (h ratio)^2.
    std::vector<double> diff, hh;
    for (std::size_t i = 0; i + 1 < sp.size(); ++i) {
      double d = 0.0;
      for (std::size_t k = 0; k < levels; ++k) {
        d = std::max(d, std::abs(sp[i + 1].eigenvalues[k] - sp[i].eigenvalues[k]));
      }
      diff.push_back(d);
      hh.push_back(h[i + 1]);
    }
    return order_deviation(diff, hh);
  });
  suite.run("oracle.node_counts", 0.0, [&] {
    const auto& rep = spectra.get().front();
    double mismatches = 0.0;
    for (std::size_t k = 0; k < levels; ++k) {
      if (rep.node_counts[k] != static_cast<int>(k)) mismatches += 1.0;
    }
    return mismatches;
  });

  // SUSY ---------------------------------------------------------------------
  Lazy<FirstOrderTransform> first([&] {
    const auto& s = setup.get();
    const auto seed = first_seed(c, s, false);
    return first_order_transform(s.profile, s.sys.potential, seed.u, seed.energy, strict);
  });
  Lazy<SecondStep> second([&] {
    const auto& s = setup.get();
    const auto seed = first_seed(c, s, false);
    const auto& st2 = s.states.at(static_cast<std::size_t>(c.seed2));
    auto t = second_order_nonconfluent(s.profile, s.sys.potential, seed.u, seed.energy,
                                       st2.wavefunction, c.epsilon2.value_or(st2.energy), strict);
    auto combined = merge_singularities(t.first.singularities, t.singularities, *s.sys.grid);
    return SecondStep{std::move(t), std::move(combined)};
  });
  auto tests_in = [&](const SingularityReport& r) {
    return interior_test_functions(setup.get().sys.grid, 3, middle_of_largest(r));
  };

  suite.run("susy.seed_residual", c.tol.seed, [&] { return first.get().seed_residual; });
  suite.run("susy.factorization_h0", c.tol.factorization, [&] {
    const auto& t = first.get();
    const auto a = intertwiner(t.profile, t.superpotential, t.hbar);
    const auto ad = intertwiner_adjoint(t.profile, t.superpotential, t.hbar);
    const Operator lhs = [&](const SampledFunction& f) { return ad(a(f)) + t.epsilon1 * f; };
    return operator_identity_residual(lhs, hamiltonian(t.profile, t.v0, t.hbar),
                                      tests_in(t.singularities));
  });
  suite.run("susy.factorization_h1", c.tol.factorization, [&] {
    const auto& t = first.get();
    const auto a = intertwiner(t.profile, t.superpotential, t.hbar);
    const auto ad = intertwiner_adjoint(t.profile, t.superpotential, t.hbar);
    const Operator lhs = [&](const SampledFunction& f) { return a(ad(f)) + t.epsilon1 * f; };
    return operator_identity_residual(lhs, hamiltonian(t.profile, t.partner_potential, t.hbar),
                                      tests_in(t.singularities));
  });
  suite.run("susy.second_factorization_h1", c.tol.factorization, [&] {
    const auto& tr = second.get();
    const auto& t = tr.transform;
    const auto& p = t.first.profile;
    const auto a = intertwiner(p, t.superpotential2, t.first.hbar);
    const auto ad = intertwiner_adjoint(p, t.superpotential2, t.first.hbar);
    const Operator lhs = [&](const SampledFunction& f) { return ad(a(f)) + t.epsilon2 * f; };
    return operator_identity_residual(lhs, hamiltonian(p, t.first.partner_potential, t.first.hbar),
                                      tests_in(tr.combined));
  });
  suite.run("susy.second_factorization_h2", c.tol.factorization, [&] {
    const auto& tr = second.get();
    const auto& t = tr.transform;
    const auto& p = t.first.profile;
    const auto a = intertwiner(p, t.superpotential2, t.first.hbar);
    const auto ad = intertwiner_adjoint(p, t.superpotential2, t.first.hbar);
    const Operator lhs = [&](const SampledFunction& f) { return a(ad(f)) + t.epsilon2 * f; };
    return operator_identity_residual(lhs, hamiltonian(p, t.partner_potential2, t.first.hbar),
                                      tests_in(tr.combined));
  });
  suite.run("susy.intertwining_first", c.tol.intertwining, [&] {
    const auto& t = first.get();
    return intertwining_residual(hamiltonian(t.profile, t.v0, t.hbar),
                                 hamiltonian(t.profile, t.partner_potential, t.hbar),
                                 intertwiner(t.profile, t.superpotential, t.hbar),
                                 tests_in(t.singularities));
  });
  suite.run("susy.intertwining_second", c.tol.intertwining_second, [&] {
    const auto& tr = second.get();
    const auto& t = tr.transform;
    const auto& p = t.first.profile;
    const auto a1 = intertwiner(p, t.first.superpotential, t.first.hbar);
    const auto a2 = intertwiner(p, t.superpotential2, t.first.hbar);
    const Operator a = [&](const SampledFunction& f) { return a2(a1(f)); };
    return intertwining_residual(hamiltonian(p, t.first.v0, t.first.hbar),
                                 hamiltonian(p, t.partner_potential2, t.first.hbar), a,
                                 tests_in(tr.combined));
  });
  suite.run("susy.intertwining_order", c.tol.order_slack, [&] {
    const auto support = middle_of_largest(first.get().singularities);
    std::vector<double> err;
    for (const auto& l : ladders.get()) {
      const auto tower = state_tower(l, c.seed, c.tol.bc);
      const auto t = first_order_transform(l, tower.back().wavefunction, tower.back().energy, loose);
      err.push_back(intertwining_residual(hamiltonian(t.profile, t.v0, t.hbar),
                                          hamiltonian(t.profile, t.partner_potential, t.hbar),
                                          intertwiner(t.profile, t.superpotential, t.hbar),
                                          interior_test_functions(l.grid, 3, support)));
    }
    return order_deviation(err, spacings());
  });

  // Two-route V1: discrepancy within 10x the Richardson estimate of either route.
  {
    double tau = kNaN;
    suite.run("susy.two_route_v1", kInf, [&] {
      const auto& t = first.get();
      const auto& coarse_sys = ladders.get()[1];
      const auto tower = state_tower(coarse_sys, c.seed, c.tol.bc);
      const auto tc = first_order_transform(coarse_sys, tower.back().wavefunction,
                                            tower.back().energy, loose);
      tau = std::max(richardson_tolerance(t.partner_potential, tc.partner_potential),
                     richardson_tolerance(t.partner_potential_riccati,
                                          tc.partner_potential_riccati));
      return t.route_discrepancy;
    });
    auto& r = suite.report.checks.back();
    r.tolerance = 10.0 * tau;
    r.pass = r.detail.empty() && std::isfinite(tau) && r.residual <= r.tolerance;
  }

  // Sequential first-order steps against the combined second-order potential.
  {
    double tau = kNaN;
    suite.run("susy.sequential_v2", kInf, [&] {
      const auto& t = second.get().transform;
      const auto& p = t.first.profile;
      auto sequential = [&](const FirstOrderTransform& f1, const SampledFunction& u2, double e2) {
        const auto v2 = intertwiner(p, f1.superpotential, f1.hbar)(u2);
        return first_order_transform(p, f1.partner_potential, v2, e2, loose).partner_potential;
      };
      const auto fine = sequential(t.first, *t.seed2, t.epsilon2);

      const auto& coarse_sys = ladders.get()[1];
      const auto tower = state_tower(coarse_sys, std::max(c.seed, c.seed2), c.tol.bc);
      const auto& s1 = tower[static_cast<std::size_t>(c.seed)];
      const auto& s2 = tower[static_cast<std::size_t>(c.seed2)];
      const auto t1c = first_order_transform(coarse_sys, s1.wavefunction, t.first.epsilon1, loose);
      const auto coarse = sequential(t1c, s2.wavefunction, t.epsilon2);
      const auto t2c = second_order_nonconfluent(coarse_sys, s1.wavefunction, t.first.epsilon1,
                                                 s2.wavefunction, t.epsilon2, loose);
      tau = std::max(richardson_tolerance(fine, coarse),
                     richardson_tolerance(t.partner_potential2, t2c.partner_potential2));
      return relative_discrepancy(fine, t.partner_potential2);
    });
    auto& r = suite.report.checks.back();
    r.tolerance = 10.0 * tau;
    r.pass = r.detail.empty() && std::isfinite(tau) && r.residual <= r.tolerance;
  }

  // Confluent d -> 0 ---------------------------------------------------------
  auto confluent_gap = [&](double d) {
    const auto& s = setup.get();
    const auto seed = first_seed(c, s, true);
    const auto t = confluent_transform(s.profile, s.sys.potential, seed.u, seed.energy, d,
                                       c.anchor, strict);
    return relative_discrepancy(t.partner_potential2, s.sys.potential);
  };
  suite.run("confluent.d0_identity", 1e-12, [&] { return confluent_gap(0.0); });
  suite.run("confluent.linear_in_d", 2.0, [&] {
    // The potential moves linearly in d: shrinking d tenfold shrinks the change tenfold.
    return std::abs(confluent_gap(1e-3) / confluent_gap(1e-4) - 10.0);
  });

  // Numerics -------------------------------------------------------------------
  suite.run("numerics.wronskian_antisymmetry", 1e-14, [&] {
    const auto& s = setup.get();
    const auto& f = s.states.at(std::min<std::size_t>(1, s.states.size() - 1)).wavefunction;
    const auto& g = s.states.back().wavefunction;
    const auto w = wronskian(f, g);
    const auto sum = w + wronskian(g, f);
    return sum.max_abs() / std::max(1.0, w.max_abs());
  });
  std::vector<double> ks{0.1, 0.5, 0.9, 0.99, -0.5};
  if (c.profile_name == "cosine") ks.push_back(2.0 / (c.m0 + 1.0));
  const std::vector<double> phis{0.3, 1.0, 2.5, -0.7, 7.0};
  suite.run("numerics.elliptic_quasi_periodicity", 1e-10, [&] {
    double worst = 0.0;
    for (double k : ks) {
      const double full = 2.0 * complete_elliptic_e(k);
      for (double phi : phis) {
        const double d = incomplete_elliptic_e(phi + M_PI, k) - incomplete_elliptic_e(phi, k) - full;
        worst = std::max(worst, std::abs(d));
      }
    }
    return worst;
  });
  suite.run("numerics.elliptic_oddness", 1e-10, [&] {
    double worst = 0.0;
    for (double k : ks) {
      for (double phi : phis) {
        worst = std::max(worst, std::abs(incomplete_elliptic_e(-phi, k) + incomplete_elliptic_e(phi, k)));
      }
    }
    return worst;
  });

  return suite.report;
}

}  // namespace pdmsusy::app
