#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <pdmsusy/mass_profile.hpp>

namespace pdmsusy::app {

/// Raised for anything wrong with the configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double bc = 1e-4;
  double seed = 1e-6;
  double eigenvalue = 1e-3;
  double residual = 1e-3;
  double commutator = 1e-3;
  double intertwining = 5e-3;
  double intertwining_second = 5e-2;
  double factorization = 5e-3;
  double annihilation = 1e-3;
  double order_slack = 0.3;  // |observed order - 2|
};

enum class TransformOrder { first, second, confluent };

struct RunConfig {
  std::string profile_name;
  double m0 = 0.0;
  std::filesystem::path profile_file;

  double delta_e = 1.0;
  std::optional<double> a;
  double hbar = 1.0;

  std::optional<double> x_min;
  std::optional<double> x_max;
  std::size_t n_points = 4001;
  bool auto_widen = true;
  double epsilon = 1e-3;

  int states = 6;
  int levels = 6;

  TransformOrder order = TransformOrder::first;
  int seed = 1;
  int seed2 = 2;
  std::filesystem::path seed_file;
  std::optional<double> epsilon1;
  std::optional<double> epsilon2;
  double d = 0.3;
  std::vector<double> d_sweep;
  std::optional<double> anchor;

  Tolerances tol;
  std::filesystem::path out_dir = "out";

  MassProfile make_profile() const;
  bool is_linear() const { return profile_name == "linear"; }
};

/// Reads a sectioned key = value file, applies `overrides` (each
/// "section.key=value"), and validates everything. Unknown sections or keys
/// are rejected.
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {});

}  // namespace pdmsusy::app
