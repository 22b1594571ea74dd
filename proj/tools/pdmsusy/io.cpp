#include "pdmsusy/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pdmsusy/config.hpp"

namespace pdmsusy::app {

namespace {

void append(std::string& buf, double v) {
  char tmp[40];
  std::snprintf(tmp, sizeof tmp, "%.17g", v);
  buf += tmp;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
               const std::vector<SampledFunction>& columns) {
  if (names.size() != columns.size()) throw std::invalid_argument("write_csv: name count");
  for (const auto& c : columns) {
    if (!same_grid(c, columns.front())) throw std::invalid_argument("write_csv: grids differ");
  }
  auto out = open_out(path);
  std::string buf = "x";
  for (const auto& n : names) buf += "," + n;
  buf += "\n";
  if (!columns.empty()) {
    const auto& g = columns.front().grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
      append(buf, g[i]);
      for (const auto& c : columns) {
        buf += ',';
        if (std::isfinite(c[i])) {
          append(buf, c[i]);
        } else {
          buf += "nan";
        }
      }
      buf += "\n";
    }
  }
  out << buf;
}

void write_json(const std::filesystem::path& path, const json& value) {
  auto out = open_out(path);
  out << value.dump(2) << "\n";
}

SampledFunction read_grid_function(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty file");
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) {
      throw ConfigError(path.string() + ": expected two columns");
    }
    try {
      xs.push_back(std::stod(a));
      ys.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw ConfigError(path.string() + ": bad number in '" + line + "'");
    }
  }
  if (xs.size() < Grid::kMinPoints) throw ConfigError(path.string() + ": too few rows");
  auto grid = build_grid(xs.front(), xs.back(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - (*grid)[i]) > 1e-9 * (1.0 + std::abs(xs[i]))) {
      throw ConfigError(path.string() + ": x column is not a uniform grid");
    }
  }
  return {grid, ys};
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

}  // namespace pdmsusy::app
