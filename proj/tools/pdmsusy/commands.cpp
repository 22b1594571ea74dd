#include "pdmsusy/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <string>
#include <thread>

namespace pdmsusy::app {

namespace {

json grid_json(const Grid& g) {
  return {{"x_min", g.x_min()}, {"x_max", g.x_max()}, {"n_points", g.size()},
          {"spacing", g.spacing()}};
}

json system_json(const RunConfig& c, const LadderSystem& sys) {
  return {{"profile", sys.profile.label()},
          {"name", c.profile_name},
          {"delta_e", sys.delta_e},
          {"a", sys.a},
          {"hbar", sys.hbar},
          {"anchor", sys.anchor},
          {"grid", grid_json(*sys.grid)}};
}

std::size_t piece_capacity(const Subdomain& piece) {
  const std::size_t n = piece.last - piece.first + 1;
  return n < 8 ? 0 : (n - 4) / 4 - 1;
}

json piece_spectra(const MassProfile& profile, const SampledFunction& potential,
                   const SingularityReport& sing, int levels, double hbar) {
  json out = json::array();
  for (const auto& piece : sing.subdomains) {
    json entry{{"x_lo", piece.x_lo}, {"x_hi", piece.x_hi}};
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(levels),
                                                piece_capacity(piece));
    if (k == 0) {
      entry["eigenvalues"] = json::array();
      entry["node_counts"] = json::array();
    } else {
      const auto rep = partner_spectrum(profile, potential, piece, k, hbar);
      entry["eigenvalues"] = numbers(rep.eigenvalues);
      entry["node_counts"] = rep.node_counts;
    }
    out.push_back(entry);
  }
  return out;
}

json missing_json(const MissingState& m, double energy) {
  json flags = json::array();
  for (bool b : m.normalizable) flags.push_back(b);
  return {{"energy", energy}, {"residual", number(m.residual)}, {"normalizable", flags}};
}

std::string d_label(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "d_%.6f", d);
  return buf;
}

}  // namespace

json singularity_json(const SingularityReport& r) {
  json pieces = json::array();
  for (const auto& p : r.subdomains) {
    pieces.push_back({{"x_lo", p.x_lo}, {"x_hi", p.x_hi}, {"points", p.last - p.first + 1}});
  }
  return {{"count", r.locations.size()},
          {"locations", numbers(r.locations)},
          {"mask_radius", r.mask_radius},
          {"subdomains", pieces}};
}

GridRequest resolve_grid(const RunConfig& c, const MassProfile& profile, int n_max) {
  const auto& dom = profile.domain();
  GridRequest r{};
  r.n_points = c.n_points;
  r.fix_left = std::isfinite(dom.lo);
  r.fix_right = std::isfinite(dom.hi);
  if (!c.seed_file.empty()) {
    const auto seed = read_grid_function(c.seed_file);
    r.x_min = seed.grid().x_min();
    r.x_max = seed.grid().x_max();
    r.n_points = seed.size();
    r.fix_left = r.fix_right = true;
  } else {
    const double lo_default = r.fix_left ? (dom.lo_open ? dom.lo + c.epsilon : dom.lo) : -6.0;
    const double hi_default = r.fix_right ? (dom.hi_open ? dom.hi - c.epsilon : dom.hi) : 6.0;
    r.x_min = c.x_min.value_or(lo_default);
    r.x_max = c.x_max.value_or(hi_default);
  }
  if (!(r.x_min < r.x_max)) throw ConfigError("grid bounds are empty for this profile");
  try {
    profile.require_grid(*build_grid(r.x_min, r.x_max, r.n_points), "grid");
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("grid leaves the profile domain: ") + e.what());
  }
  if (c.auto_widen && c.seed_file.empty() && !(r.fix_left && r.fix_right)) {
    const auto g = auto_widen_grid(profile, c.delta_e, r, n_max, c.a, c.hbar);
    r.x_min = g->x_min();
    r.x_max = g->x_max();
  }
  return r;
}

LadderSystem system_on(const RunConfig& c, const MassProfile& profile, const GridRequest& request,
                       std::size_t n_points) {
  return build_ladder_system(profile, c.delta_e, build_grid(request.x_min, request.x_max, n_points),
                             c.a, c.hbar);
}

Setup make_setup(const RunConfig& c, int n_max) {
  auto profile = c.make_profile();
  auto request = resolve_grid(c, profile, n_max);
  auto sys = system_on(c, profile, request, request.n_points);
  auto states = state_tower(sys, n_max, c.tol.bc);
  return {std::move(profile), request, std::move(sys), std::move(states)};
}

SpectrumReport oracle_spectrum(const LadderSystem& sys, std::size_t k) {
  return solve_spectrum(discretize(sys.profile, sys.potential, BoundaryCondition::dirichlet(),
                                   sys.hbar),
                        k, sys.profile);
}

Seed first_seed(const RunConfig& c, const Setup& s, bool bare) {
  if (!c.seed_file.empty()) {
    const auto u = read_grid_function(c.seed_file);
    return {SampledFunction(s.sys.grid, std::vector<double>(u.values().begin(), u.values().end())),
            *c.epsilon1};
  }
  const auto& st = s.states.at(static_cast<std::size_t>(c.seed));
  return {bare ? st.bare() : st.wavefunction, c.epsilon1.value_or(st.energy)};
}

json run_ladder(const RunConfig& c, const std::filesystem::path& out) {
  const auto s = make_setup(c, c.states - 1);
  json states = json::array();
  std::vector<std::string> names;
  std::vector<SampledFunction> cols;
  std::vector<double> energies;
  json bc = json::array();
  for (const auto& st : s.states) {
    states.push_back({{"index", st.index},
                      {"energy", st.energy},
                      {"bc_satisfied", st.satisfies_bc},
                      {"bc_residual", number(st.bc_residual)},
                      {"nodes", count_nodes(st.wavefunction)}});
    energies.push_back(st.energy);
    bc.push_back(st.satisfies_bc);
    names.push_back("psi_" + std::to_string(st.index));
    cols.push_back(st.wavefunction);
  }
  json summary = system_json(c, s.sys);
  summary["energies"] = energies;
  summary["bc_satisfied"] = bc;
  summary["states"] = states;

  write_csv(out / "potential.csv", {"V"}, {s.sys.potential});
  write_csv(out / "states.csv", names, cols);
  write_json(out / "spectrum.json", summary);
  return summary;
}

json run_solve(const RunConfig& c, const std::filesystem::path& out) {
  const auto levels = static_cast<std::size_t>(c.levels);
  auto s = make_setup(c, c.levels - 1);
  s.states = state_tower(s.sys, 2 * c.levels - 1, c.tol.bc);

  std::vector<double> reference;
  for (const auto& st : s.states) {
    if (st.satisfies_bc && reference.size() < levels) reference.push_back(st.energy);
  }
  const auto rep = oracle_spectrum(s.sys, levels);

  json table = json::array();
  double max_dev = 0.0;
  for (std::size_t k = 0; k < levels; ++k) {
    json row{{"k", k}, {"oracle", rep.eigenvalues[k]}, {"nodes", rep.node_counts[k]}};
    if (k < reference.size()) {
      const double dev = std::abs(rep.eigenvalues[k] - reference[k]);
      max_dev = std::max(max_dev, dev);
      row["ladder"] = reference[k];
      row["deviation"] = dev;
    } else {
      row["ladder"] = nullptr;
      row["deviation"] = nullptr;
    }
    table.push_back(row);
  }

  json summary = system_json(c, s.sys);
  summary["eigenvalues"] = rep.eigenvalues;
  summary["node_counts"] = rep.node_counts;
  summary["ladder_levels"] = reference;
  summary["deviations"] = table;
  summary["max_deviation"] = max_dev;

  if (c.is_linear()) {
    // E(eps) = E0 + C eps^p, with p measured from eps, 2 eps, 4 eps.
    const double eps = s.sys.grid->x_min();
    auto at = [&](double e) {
      GridRequest r = s.request;
      r.x_min = e;
      return oracle_spectrum(system_on(c, s.profile, r, r.n_points), levels).eigenvalues;
    };
    const auto e2 = at(2.0 * eps);
    const auto e4 = at(4.0 * eps);
    std::vector<double> extrapolated, powers;
    double max_ext = 0.0;
    for (std::size_t k = 0; k < levels; ++k) {
      const double d1 = e2[k] - rep.eigenvalues[k];
      const double d2 = e4[k] - e2[k];
      const double p = (d1 != 0.0 && d2 / d1 > 1.0) ? std::log2(d2 / d1) : 1.0;
      powers.push_back(p);
      extrapolated.push_back(extrapolate_power(eps, rep.eigenvalues[k], 2.0 * eps, e2[k], p));
      if (k < reference.size()) {
        max_ext = std::max(max_ext, std::abs(extrapolated.back() - reference[k]));
      }
    }
    summary["epsilon_extrapolation"] = {{"epsilon", eps},
                                        {"eigenvalues_2eps", e2},
                                        {"eigenvalues_4eps", e4},
                                        {"powers", powers},
                                        {"extrapolated", extrapolated},
                                        {"max_deviation", max_ext}};
  }

  std::vector<std::string> names;
  for (std::size_t k = 0; k < levels; ++k) names.push_back("phi_" + std::to_string(k));
  write_csv(out / "eigenfunctions.csv", names, rep.eigenfunctions);
  write_json(out / "spectrum.json", summary);
  return summary;
}

namespace {

json susy_first(const RunConfig& c, const Setup& s, const std::filesystem::path& out) {
  const auto seed = first_seed(c, s, false);
  const TransformOptions opt{c.hbar, c.tol.seed, 3};
  const auto t = first_order_transform(s.profile, s.sys.potential, seed.u, seed.energy, opt);
  const auto missing = missing_state_first(t);

  json mapped = json::array();
  std::vector<std::string> names;
  std::vector<SampledFunction> cols;
  for (int n = 0; n < c.states; ++n) {
    const auto& st = s.states[static_cast<std::size_t>(n)];
    const auto m = map_state_first(t, st.wavefunction);
    mapped.push_back({{"index", n}, {"energy", st.energy}, {"null", m.null}});
    if (!m.null) {
      names.push_back("chi_" + std::to_string(n));
      cols.push_back(m.state);
    }
  }
  names.push_back("missing");
  cols.push_back(missing.state);

  json summary = system_json(c, s.sys);
  summary["order"] = "first";
  summary["epsilon1"] = seed.energy;
  summary["seed_residual"] = number(t.seed_residual);
  summary["route_discrepancy"] = number(t.route_discrepancy);
  summary["singularities"] = singularity_json(t.singularities);
  summary["subdomains"] =
      piece_spectra(s.profile, t.partner_potential, t.singularities, c.levels, c.hbar);
  summary["missing_state"] = missing_json(missing, seed.energy);
  summary["mapped_states"] = mapped;

  write_csv(out / "V1.csv", {"V0", "V1", "V1_riccati", "W1", "u1"},
            {s.sys.potential, t.partner_potential, t.partner_potential_riccati, t.superpotential,
             seed.u});
  write_csv(out / "mapped_states.csv", names, cols);
  write_json(out / "singularities.json", singularity_json(t.singularities));
  write_json(out / "spectrum.json", summary);
  return summary;
}

json second_summary(const RunConfig& c, const Setup& s, const SecondOrderTransform& t,
                    const std::filesystem::path& out) {
  const bool confluent = t.mode == SecondOrderMode::confluent;
  const auto missing = confluent ? missing_state_confluent(t) : missing_state_second(t);

  json mapped = json::array();
  std::vector<std::string> names;
  std::vector<SampledFunction> cols;
  for (int n = 0; n < c.states; ++n) {
    const auto& st = s.states[static_cast<std::size_t>(n)];
    const auto m = map_state_second(t, st.wavefunction, st.energy);
    mapped.push_back({{"index", n}, {"energy", st.energy}, {"null", m.null}});
    if (!m.null) {
      names.push_back("chi_" + std::to_string(n));
      cols.push_back(m.state);
    }
  }
  names.push_back("missing");
  cols.push_back(missing.state);

  json summary = system_json(c, s.sys);
  summary["order"] = confluent ? "confluent" : "second";
  summary["epsilon1"] = t.first.epsilon1;
  summary["epsilon2"] = t.epsilon2;
  if (confluent) {
    summary["d"] = t.d_parameter;
    summary["anchor"] = t.anchor;
  }
  summary["singularities"] = singularity_json(t.singularities);
  summary["subdomains"] =
      piece_spectra(s.profile, t.partner_potential2, t.singularities, c.levels, c.hbar);
  summary["missing_state"] = missing_json(missing, t.epsilon2);
  summary["mapped_states"] = mapped;

  write_csv(out / "V2.csv",
            {"V0", "V1", "V2", "W1", "W2", confluent ? "w" : "wronskian"},
            {s.sys.potential, t.first.partner_potential, t.partner_potential2,
             t.first.superpotential, t.superpotential2, t.denominator});
  write_csv(out / "mapped_states.csv", names, cols);
  write_json(out / "singularities.json", singularity_json(t.singularities));
  write_json(out / "spectrum.json", summary);
  return summary;
}

json susy_second(const RunConfig& c, const Setup& s, const std::filesystem::path& out) {
  const auto seed = first_seed(c, s, false);
  const auto& st2 = s.states.at(static_cast<std::size_t>(c.seed2));
  const double e2 = c.epsilon2.value_or(st2.energy);
  const TransformOptions opt{c.hbar, c.tol.seed, 3};
  const auto t = second_order_nonconfluent(s.profile, s.sys.potential, seed.u, seed.energy,
                                           st2.wavefunction, e2, opt);
  return second_summary(c, s, t, out);
}

json susy_confluent(const RunConfig& c, const Setup& s, const std::filesystem::path& out,
                    int jobs) {
  const auto seed = first_seed(c, s, true);
  const TransformOptions opt{c.hbar, c.tol.seed, 3};
  const auto crit = critical_d(seed.u, c.anchor);

  auto one = [&](double d, const std::filesystem::path& dir) {
    const auto t = confluent_transform(s.profile, s.sys.potential, seed.u, seed.energy, d,
                                       c.anchor, opt);
    return second_summary(c, s, t, dir);
  };

  if (c.d_sweep.empty()) {
    auto summary = one(c.d, out);
    summary["critical_d"] = crit.d;
    summary["critical_d_regular_everywhere"] = crit.regular_everywhere;
    write_json(out / "spectrum.json", summary);
    return summary;
  }

  const std::size_t n = c.d_sweep.size();
  std::vector<json> results(n);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t i) {
    try {
      const double d = c.d_sweep[i];
      results[i] = one(d, out / d_label(d));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(jobs), 1, n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  json cases = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = results[i];
    cases.push_back({{"d", c.d_sweep[i]},
                     {"directory", d_label(c.d_sweep[i])},
                     {"poles", r["singularities"]["count"]},
                     {"pole_free", r["singularities"]["count"] == 0},
                     {"locations", r["singularities"]["locations"]}});
  }
  json sweep = system_json(c, s.sys);
  sweep["order"] = "confluent";
  sweep["epsilon1"] = seed.energy;
  sweep["critical_d"] = crit.d;
  sweep["critical_d_regular_everywhere"] = crit.regular_everywhere;
  sweep["cases"] = cases;
  write_json(out / "sweep.json", sweep);
  return sweep;
}

}  // namespace

json run_susy(const RunConfig& c, const std::filesystem::path& out, int jobs) {
  const int n_max = std::max({c.states - 1, c.seed, c.seed2, c.levels - 1});
  const auto s = make_setup(c, n_max);
  switch (c.order) {
    case TransformOrder::first:
      return susy_first(c, s, out);
    case TransformOrder::second:
      return susy_second(c, s, out);
    case TransformOrder::confluent:
      return susy_confluent(c, s, out, jobs);
  }
  return {};
}

}  // namespace pdmsusy::app
