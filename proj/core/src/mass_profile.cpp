#include "pdmsusy/mass_profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace pdmsusy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_x(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Second-derivative form of a not-a-knot cubic spline.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)), M_(x_.size(), 0.0) {
    const std::size_t n = x_.size();
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      d[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    // Unknowns M_1..M_{n-2}; M_0 and M_{n-1} eliminated by the not-a-knot rule.
    const std::size_t m = n - 2;
    std::vector<double> lo(m, 0.0), di(m, 0.0), up(m, 0.0), rhs(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      const std::size_t i = r + 1;
      lo[r] = h[i - 1];
      di[r] = 2.0 * (h[i - 1] + h[i]);
      up[r] = h[i];
      rhs[r] = 6.0 * (d[i] - d[i - 1]);
    }
    const double h0 = h[0], h1 = h[1];
    di[0] = 3.0 * h0 + 2.0 * h1 + h0 * h0 / h1;
    up[0] = h1 - h0 * h0 / h1;
    const double ha = h[n - 2], hb = h[n - 3];
    di[m - 1] = 3.0 * ha + 2.0 * hb + ha * ha / hb;
    lo[m - 1] = hb - ha * ha / hb;
    for (std::size_t r = 1; r < m; ++r) {
      const double w = lo[r] / di[r - 1];
      di[r] -= w * up[r - 1];
      rhs[r] -= w * rhs[r - 1];
    }
    M_[m] = rhs[m - 1] / di[m - 1];
    for (std::size_t r = m - 1; r-- > 0;) M_[r + 1] = (rhs[r] - up[r] * M_[r + 2]) / di[r];
    M_[0] = M_[1] + h0 * (M_[1] - M_[2]) / h1;
    M_[n - 1] = M_[n - 2] + ha * (M_[n - 2] - M_[n - 3]) / hb;
  }

  double value(double x, int order) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - x_.begin() - 1, 0));
    i = std::min(i, x_.size() - 2);
    const double h = x_[i + 1] - x_[i];
    const double a = x_[i + 1] - x, b = x - x_[i];
    const double ca = y_[i] / h - M_[i] * h / 6.0, cb = y_[i + 1] / h - M_[i + 1] * h / 6.0;
    switch (order) {
      case 0:
        return (M_[i] * a * a * a + M_[i + 1] * b * b * b) / (6.0 * h) + ca * a + cb * b;
      case 1:
        return (-M_[i] * a * a + M_[i + 1] * b * b) / (2.0 * h) - ca + cb;
      default:
        return (M_[i] * a + M_[i + 1] * b) / h;
    }
  }

 private:
  std::vector<double> x_, y_, M_;
};

}  // namespace

// Interval ------------------------------------------------------------------

bool Interval::contains(double x) const noexcept {
  const bool above = lo_open ? x > lo : x >= lo;
  const bool below = hi_open ? x < hi : x <= hi;
  return above && below;
}

bool Interval::closure_contains(double x) const noexcept { return x >= lo && x <= hi; }

bool Interval::covers(const Grid& g) const noexcept {
  return contains(g.x_min()) && contains(g.x_max());
}

// MassProfile ---------------------------------------------------------------

MassProfile::MassProfile(Fn m, Fn m1, Fn m2, Interval domain, std::string label)
    : m_(std::move(m)), m1_(std::move(m1)), m2_(std::move(m2)), domain_(domain),
      label_(std::move(label)) {}

void MassProfile::check(double x) const {
  if (!domain_.contains(x)) {
    throw std::domain_error("mass profile '" + label_ + "' evaluated outside its domain at x = " +
                            format_x(x));
  }
}

double MassProfile::m(double x) const {
  check(x);
  return m_(x);
}

double MassProfile::m1(double x) const {
  check(x);
  return m1_(x);
}

double MassProfile::m2(double x) const {
  check(x);
  return m2_(x);
}

void MassProfile::require_grid(const Grid& g, const char* where) const {
  if (!domain_.covers(g)) {
    throw std::domain_error(std::string(where) + ": grid [" + format_x(g.x_min()) + ", " +
                            format_x(g.x_max()) + "] leaves the domain of profile '" + label_ +
                            "'");
  }
}

SampledFunction MassProfile::sample_m(const GridPtr& g) const {
  require_grid(*g, "sample_m");
  return SampledFunction::sample(g, m_);
}

SampledFunction MassProfile::sample_m1(const GridPtr& g) const {
  require_grid(*g, "sample_m1");
  return SampledFunction::sample(g, m1_);
}

SampledFunction MassProfile::sample_m2(const GridPtr& g) const {
  require_grid(*g, "sample_m2");
  return SampledFunction::sample(g, m2_);
}

// Built-in profiles -----------------------------------------------------------

MassProfile constant_profile(double m0) {
  if (!(m0 > 0.0)) throw std::invalid_argument("constant_profile: m0 must be positive");
  return MassProfile([m0](double) { return m0; }, [](double) { return 0.0; },
                     [](double) { return 0.0; }, Interval{-kInf, kInf},
                     "constant(m0=" + format_x(m0) + ")");
}

MassProfile quadratic_profile(double m0) {
  if (!(m0 > 0.0)) throw std::invalid_argument("quadratic_profile: m0 must be positive");
  return MassProfile([m0](double x) { return 0.5 * x * x + m0; }, [](double x) { return x; },
                     [](double) { return 1.0; }, Interval{-kInf, kInf},
                     "quadratic(m0=" + format_x(m0) + ")");
}

MassProfile cosine_profile(double m0) {
  if (!(m0 > 1.0)) throw std::invalid_argument("cosine_profile: m0 must exceed 1");
  return MassProfile([m0](double x) { return std::cos(x) + m0; },
                     [](double x) { return -std::sin(x); }, [](double x) { return -std::cos(x); },
                     Interval{-kInf, kInf}, "cosine(m0=" + format_x(m0) + ")");
}

MassProfile linear_profile() {
  return MassProfile([](double x) { return x; }, [](double) { return 1.0; },
                     [](double) { return 0.0; }, Interval{0.0, kInf}, "linear");
}

MassProfile tabulated_profile(const std::vector<std::pair<double, double>>& samples,
                              std::string label) {
  if (samples.size() < 16) {
    throw std::invalid_argument("tabulated_profile: at least 16 samples are required");
  }
  std::vector<double> x, y;
  x.reserve(samples.size());
  y.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [xi, mi] = samples[i];
    if (!std::isfinite(xi) || !std::isfinite(mi)) {
      throw std::invalid_argument("tabulated_profile: non-finite sample");
    }
    if (i > 0 && !(xi > x.back())) {
      throw std::invalid_argument("tabulated_profile: x must be strictly increasing (at x = " +
                                  format_x(xi) + ")");
    }
    if (!(mi > 0.0)) {
      throw std::invalid_argument("tabulated_profile: non-positive mass at x = " + format_x(xi));
    }
    x.push_back(xi);
    y.push_back(mi);
  }
  const Interval domain{x.front(), x.back(), false, false};
  auto spline = std::make_shared<const CubicSpline>(std::move(x), std::move(y));
  return MassProfile([spline](double v) { return spline->value(v, 0); },
                     [spline](double v) { return spline->value(v, 1); },
                     [spline](double v) { return spline->value(v, 2); }, domain,
                     std::move(label));
}

MassProfile read_tabulated_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open mass profile file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty mass profile file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (line != "x,m") {
    throw std::invalid_argument("mass profile file must start with header 'x,m'");
  }
  std::vector<std::pair<double, double>> samples;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("mass profile line " + std::to_string(lineno) +
                                  ": expected two columns");
    }
    try {
      std::size_t used = 0;
      const std::string xs = line.substr(0, comma), ms = line.substr(comma + 1);
      const double xv = std::stod(xs, &used);
      if (used != xs.size()) throw std::invalid_argument("trailing characters");
      const double mv = std::stod(ms, &used);
      if (used != ms.size()) throw std::invalid_argument("trailing characters");
      samples.emplace_back(xv, mv);
    } catch (const std::exception&) {
      throw std::invalid_argument("mass profile line " + std::to_string(lineno) +
                                  ": malformed number");
    }
  }
  return tabulated_profile(samples, "tabulated(" + path.filename().string() + ")");
}

// Orderings -----------------------------------------------------------------

OrderingParameters::OrderingParameters(double alpha, double beta, double gamma)
    : alpha_(alpha), beta_(beta), gamma_(gamma) {
  if (std::abs(alpha + beta + gamma + 1.0) > 1e-12) {
    throw std::invalid_argument("OrderingParameters: alpha + beta + gamma must equal -1");
  }
}

namespace {

SampledFunction ordering_correction(const SampledFunction& v, const MassProfile& profile,
                                    const OrderingParameters& o, double hbar) {
  const Grid& g = v.grid();
  profile.require_grid(g, "veff_from_ordering");
  const double a = o.alpha(), b = o.beta();
  const double quad = a * a + a * b + a + b + 1.0;
  std::vector<double> c(g.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double m = profile.m(g[i]), m1 = profile.m1(g[i]), m2 = profile.m2(g[i]);
    c[i] = hbar * hbar * ((1.0 + b) * m2 / (4.0 * m * m) - m1 * m1 / (2.0 * m * m * m) * quad);
  }
  return SampledFunction(v.grid_ptr(), std::move(c));
}

}  // namespace

SampledFunction veff_from_ordering(const SampledFunction& v, const MassProfile& profile,
                                   const OrderingParameters& ordering, double hbar) {
  return v + ordering_correction(v, profile, ordering, hbar);
}

SampledFunction v_from_veff(const SampledFunction& veff, const MassProfile& profile,
                            const OrderingParameters& ordering, double hbar) {
  return veff - ordering_correction(veff, profile, ordering, hbar);
}

}  // namespace pdmsusy
