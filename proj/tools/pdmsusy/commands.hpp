#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include <pdmsusy/pdmsusy.hpp>

#include "pdmsusy/config.hpp"
#include "pdmsusy/io.hpp"

namespace pdmsusy::app {

/// A ladder system on the resolved grid plus its formal states.
struct Setup {
  MassProfile profile;
  GridRequest request;
  LadderSystem sys;
  std::vector<FormalState> states;  // indices 0..n_max
};

/// Grid bounds for the configuration. Without explicit bounds the linear
/// profile uses [epsilon, 6] (left end fixed), a tabulated profile its table
/// range (both ends fixed) and the rest [-6, 6]. With auto_widen the free
/// ends grow until psi_{n_max} has decayed.
GridRequest resolve_grid(const RunConfig& c, const MassProfile& profile, int n_max);

Setup make_setup(const RunConfig& c, int n_max);

/// Same bounds and physics with a different point count.
LadderSystem system_on(const RunConfig& c, const MassProfile& profile, const GridRequest& request,
                       std::size_t n_points);

/// Dirichlet oracle spectrum of the ladder potential.
SpectrumReport oracle_spectrum(const LadderSystem& sys, std::size_t k);

/// Each command writes its files under `out` and returns the summary that
/// went into spectrum.json (or sweep.json).
json run_ladder(const RunConfig& c, const std::filesystem::path& out);
json run_solve(const RunConfig& c, const std::filesystem::path& out);
json run_susy(const RunConfig& c, const std::filesystem::path& out, int jobs = 1);

/// Seed for the transforms: the configured seed file, or formal state
/// `index` of the setup. Confluent transforms take the state at its bare
/// scale, which fixes the meaning of d.
struct Seed {
  SampledFunction u;
  double energy;
};
Seed first_seed(const RunConfig& c, const Setup& s, bool bare);

json singularity_json(const SingularityReport& r);

}  // namespace pdmsusy::app
