#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>
#include <pdmsusy/numerics.hpp>

namespace pdmsusy::app {

using nlohmann::json;

/// CSV with an `x` column followed by one column per function, all on the
/// same grid. Values use 17 significant digits; masked samples print `nan`.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
               const std::vector<SampledFunction>& columns);

void write_json(const std::filesystem::path& path, const json& value);

/// Reads a two-column `x,<name>` CSV on a uniform grid.
SampledFunction read_grid_function(const std::filesystem::path& path);

/// Finite doubles as numbers, everything else as null.
json number(double v);
json numbers(const std::vector<double>& v);

}  // namespace pdmsusy::app
