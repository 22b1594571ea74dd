#include "pdmsusy/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace pdmsusy::app {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"profile", {"name", "m0", "file"}},
      {"system", {"delta_e", "a", "hbar"}},
      {"grid", {"x_min", "x_max", "n_points", "auto_widen", "epsilon"}},
      {"states", {"count", "levels"}},
      {"transform",
       {"order", "seed", "seed2", "seed_file", "epsilon1", "epsilon2", "d", "d_sweep", "anchor"}},
      {"tolerances",
       {"bc", "seed", "eigenvalue", "residual", "commutator", "intertwining", "intertwining_second",
        "factorization", "annihilation",
        "order_slack"}},
      {"output", {"dir"}},
  };
  return s;
}

std::string trim(std::string s) {
  const auto ws = " \t\r\n";
  s.erase(0, s.find_first_not_of(ws));
  s.erase(s.find_last_not_of(ws) + 1);
  return s;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (trim(v.substr(used)).empty() && std::isfinite(x)) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
}

long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (trim(v.substr(used)).empty()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
}

bool to_bool(const std::string& key, std::string v) {
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + v + "'");
}

// "a:b:step" or a comma-separated list.
std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (v.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(v);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(trim(p));
    if (parts.size() != 3) throw ConfigError("'" + key + "' range must be start:stop:step");
    const double a = to_double(key, parts[0]), b = to_double(key, parts[1]),
                 s = to_double(key, parts[2]);
    if (!(s > 0.0) || b < a) throw ConfigError("'" + key + "' range is empty or has step <= 0");
    const auto count = static_cast<long>(std::floor((b - a) / s + 1e-9));
    for (long i = 0; i <= count; ++i) {
      out.push_back(std::round((a + s * static_cast<double>(i)) * 1e12) / 1e12);
    }
    return out;
  }
  std::stringstream ss(v);
  for (std::string p; std::getline(ss, p, ',');) {
    p = trim(p);
    if (!p.empty()) out.push_back(to_double(key, p));
  }
  if (out.empty()) throw ConfigError("'" + key + "' is empty");
  return out;
}

}  // namespace

MassProfile RunConfig::make_profile() const {
  if (profile_name == "constant") return constant_profile(m0);
  if (profile_name == "quadratic") return quadratic_profile(m0);
  if (profile_name == "cosine") return cosine_profile(m0);
  if (profile_name == "linear") return linear_profile();
  return read_tabulated_profile(profile_file);
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("cannot read config: " + std::string(e.what()));
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw ConfigError("override '" + o + "' must look like section.key=value");
    }
    tree.put(pt::ptree::path_type(trim(o.substr(0, eq)), '.'), trim(o.substr(eq + 1)));
  }

  std::map<std::string, std::string> kv;
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError("unknown section [" + section + "]");
    if (!body.data().empty()) throw ConfigError("'" + section + "' must be a section");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
      kv[section + "." + key] = trim(value.data());
    }
  }
  auto get = [&](const std::string& k) -> std::optional<std::string> {
    const auto it = kv.find(k);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  auto num = [&](const std::string& k) -> std::optional<double> {
    if (auto v = get(k)) return to_double(k, *v);
    return std::nullopt;
  };

  RunConfig c;
  auto name = get("profile.name");
  if (!name || name->empty()) throw ConfigError("[profile] name is required");
  c.profile_name = *name;
  static const std::set<std::string> names{"constant", "quadratic", "cosine", "linear", "tabulated"};
  if (!names.count(c.profile_name)) throw ConfigError("unknown profile '" + c.profile_name + "'");
  if (c.profile_name == "tabulated") {
    auto f = get("profile.file");
    if (!f) throw ConfigError("tabulated profile needs [profile] file");
    c.profile_file = *f;
    if (c.profile_file.is_relative()) c.profile_file = path.parent_path() / c.profile_file;
  } else if (c.profile_name != "linear") {
    const double fallback = c.profile_name == "constant" ? 1.0 : (c.profile_name == "cosine" ? 1.15 : 0.15);
    c.m0 = num("profile.m0").value_or(fallback);
  }

  c.delta_e = num("system.delta_e").value_or(1.0);
  c.hbar = num("system.hbar").value_or(1.0);
  c.a = num("system.a");
  if (!(c.delta_e > 0.0)) throw ConfigError("[system] delta_e must be positive");
  if (!(c.hbar > 0.0)) throw ConfigError("[system] hbar must be positive");
  if (c.a && *c.a == 0.0) throw ConfigError("[system] a must be non-zero");

  c.x_min = num("grid.x_min");
  c.x_max = num("grid.x_max");
  if (auto v = get("grid.n_points")) {
    const long n = to_int("grid.n_points", *v);
    if (n < 16) throw ConfigError("[grid] n_points must be at least 16");
    c.n_points = static_cast<std::size_t>(n);
  }
  if (auto v = get("grid.auto_widen")) c.auto_widen = to_bool("grid.auto_widen", *v);
  c.epsilon = num("grid.epsilon").value_or(1e-3);
  if (!(c.epsilon > 0.0)) throw ConfigError("[grid] epsilon must be positive");
  if (c.x_min && c.x_max && !(*c.x_min < *c.x_max)) {
    throw ConfigError("[grid] x_min must be below x_max");
  }

  if (auto v = get("states.count")) c.states = static_cast<int>(to_int("states.count", *v));
  c.levels = c.states;
  if (auto v = get("states.levels")) c.levels = static_cast<int>(to_int("states.levels", *v));
  if (c.states < 1) throw ConfigError("[states] count must be at least 1");
  if (c.levels < 1 || 4 * static_cast<std::size_t>(c.levels) >= c.n_points) {
    throw ConfigError("[states] levels must satisfy 1 <= levels < n_points/4");
  }

  if (auto v = get("transform.order")) {
    if (*v == "first" || *v == "1") {
      c.order = TransformOrder::first;
    } else if (*v == "second" || *v == "2") {
      c.order = TransformOrder::second;
    } else if (*v == "confluent") {
      c.order = TransformOrder::confluent;
    } else {
      throw ConfigError("[transform] order must be first, second or confluent");
    }
  }
  if (auto v = get("transform.seed")) c.seed = static_cast<int>(to_int("transform.seed", *v));
  if (auto v = get("transform.seed2")) c.seed2 = static_cast<int>(to_int("transform.seed2", *v));
  if (c.seed < 0 || c.seed2 < 0) throw ConfigError("[transform] seed indices must be >= 0");
  if (auto v = get("transform.seed_file")) {
    c.seed_file = *v;
    if (c.seed_file.is_relative()) c.seed_file = path.parent_path() / c.seed_file;
  }
  c.epsilon1 = num("transform.epsilon1");
  c.epsilon2 = num("transform.epsilon2");
  if (!c.seed_file.empty() && !c.epsilon1) {
    throw ConfigError("[transform] seed_file requires epsilon1");
  }
  c.d = num("transform.d").value_or(0.3);
  if (!(c.d >= 0.0 && c.d <= 1.0)) throw ConfigError("[transform] d must lie in [0, 1]");
  if (auto v = get("transform.d_sweep")) {
    c.d_sweep = to_list("transform.d_sweep", *v);
    for (double d : c.d_sweep) {
      if (!(d >= 0.0 && d <= 1.0)) throw ConfigError("[transform] d_sweep values must lie in [0, 1]");
    }
  }
  c.anchor = num("transform.anchor");
  if (c.order == TransformOrder::second && c.seed == c.seed2 && c.seed_file.empty()) {
    throw ConfigError("[transform] second order needs distinct seed and seed2; use confluent");
  }

  if (c.profile_name == "constant") {
    c.tol.eigenvalue = 1e-4;
    c.tol.residual = 1e-4;
    c.tol.commutator = 1e-4;
    c.tol.intertwining = 1e-3;
    c.tol.intertwining_second = 1e-3;
  }
  const std::pair<const char*, double*> tols[] = {
      {"tolerances.bc", &c.tol.bc},
      {"tolerances.seed", &c.tol.seed},
      {"tolerances.eigenvalue", &c.tol.eigenvalue},
      {"tolerances.residual", &c.tol.residual},
      {"tolerances.commutator", &c.tol.commutator},
      {"tolerances.intertwining", &c.tol.intertwining},
      {"tolerances.intertwining_second", &c.tol.intertwining_second},
      {"tolerances.factorization", &c.tol.factorization},
      {"tolerances.annihilation", &c.tol.annihilation},
      {"tolerances.order_slack", &c.tol.order_slack},
  };
  for (const auto& [key, dst] : tols) {
    if (auto v = num(key)) {
      if (!(*v > 0.0)) throw ConfigError(std::string("'") + key + "' must be positive");
      *dst = *v;
    }
  }
  if (auto v = get("output.dir")) c.out_dir = *v;

  // Build the profile now so that bad parameters surface as config errors.
  try {
    (void)c.make_profile();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid profile: ") + e.what());
  }
  return c;
}

}  // namespace pdmsusy::app
