#include "pdmsusy/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pdmsusy/errors.hpp"

namespace pdmsusy {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool finite(double v) { return std::isfinite(v); }

}  // namespace

// Grid ----------------------------------------------------------------------

Grid::Grid(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), h_(0.0) {
  if (!(x_min < x_max) || !finite(x_min) || !finite(x_max)) {
    throw std::invalid_argument("build_grid: require finite x_min < x_max");
  }
  if (n_points < kMinPoints) {
    throw std::invalid_argument("build_grid: at least 16 points are required, got " +
                                std::to_string(n_points));
  }
  h_ = (x_max - x_min) / static_cast<double>(n_points - 1);
  points_.resize(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    points_[i] = x_min + h_ * static_cast<double>(i);
  }
  points_.back() = x_max;
}

Grid::Grid(std::vector<double> points, double h)
    : x_min_(points.front()), x_max_(points.back()), h_(h), points_(std::move(points)) {}

std::size_t Grid::nearest_index(double x) const noexcept {
  if (x <= x_min_) return 0;
  if (x >= x_max_) return points_.size() - 1;
  const double r = (x - x_min_) / h_;
  auto i = static_cast<std::size_t>(std::llround(r));
  return std::min(i, points_.size() - 1);
}

std::shared_ptr<const Grid> Grid::slice(std::size_t first, std::size_t last) const {
  if (first >= last || last >= points_.size()) {
    throw std::invalid_argument("Grid::slice: invalid index range");
  }
  if (last - first + 1 < kMinPoints) {
    throw std::invalid_argument("Grid::slice: sub-grid shorter than 16 points");
  }
  std::vector<double> pts(points_.begin() + static_cast<std::ptrdiff_t>(first),
                          points_.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  return std::shared_ptr<const Grid>(new Grid(std::move(pts), h_));
}

bool Grid::operator==(const Grid& other) const noexcept {
  return this == &other || (x_min_ == other.x_min_ && x_max_ == other.x_max_ &&
                            points_.size() == other.points_.size());
}

GridPtr build_grid(double x_min, double x_max, std::size_t n_points) {
  return std::make_shared<const Grid>(x_min, x_max, n_points);
}

// SampledFunction -------------------------------------------------------------

SampledFunction::SampledFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("SampledFunction: null grid");
  if (values_.size() != grid_->size()) {
    throw std::invalid_argument("SampledFunction: value count does not match grid");
  }
}

SampledFunction SampledFunction::zeros(GridPtr grid) { return constant(std::move(grid), 0.0); }

SampledFunction SampledFunction::constant(GridPtr grid, double value) {
  const std::size_t n = grid->size();
  return SampledFunction(std::move(grid), std::vector<double>(n, value));
}

SampledFunction SampledFunction::sample(GridPtr grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f((*grid)[i]);
  return SampledFunction(std::move(grid), std::move(v));
}

bool SampledFunction::is_masked(std::size_t i) const { return !finite(values_[i]); }

double SampledFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) {
    if (finite(v)) m = std::max(m, std::abs(v));
  }
  return m;
}

SampledFunction SampledFunction::restricted(GridPtr sub, std::size_t first) const {
  if (first + sub->size() > values_.size()) {
    throw std::invalid_argument("SampledFunction::restricted: range exceeds samples");
  }
  std::vector<double> v(values_.begin() + static_cast<std::ptrdiff_t>(first),
                        values_.begin() + static_cast<std::ptrdiff_t>(first + sub->size()));
  return SampledFunction(std::move(sub), std::move(v));
}

SampledFunction SampledFunction::map(const std::function<double(double)>& f) const {
  std::vector<double> v(values_.size());
  std::transform(values_.begin(), values_.end(), v.begin(), f);
  return SampledFunction(grid_, std::move(v));
}

SampledFunction& SampledFunction::operator+=(const SampledFunction& rhs) {
  require_same_grid(*this, rhs, "operator+");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += rhs.values_[i];
  return *this;
}

SampledFunction& SampledFunction::operator-=(const SampledFunction& rhs) {
  require_same_grid(*this, rhs, "operator-");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= rhs.values_[i];
  return *this;
}

SampledFunction& SampledFunction::operator*=(const SampledFunction& rhs) {
  require_same_grid(*this, rhs, "operator*");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= rhs.values_[i];
  return *this;
}

SampledFunction& SampledFunction::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

SampledFunction operator+(SampledFunction a, const SampledFunction& b) { return a += b; }
SampledFunction operator-(SampledFunction a, const SampledFunction& b) { return a -= b; }
SampledFunction operator*(SampledFunction a, const SampledFunction& b) { return a *= b; }
SampledFunction operator*(SampledFunction a, double s) { return a *= s; }
SampledFunction operator*(double s, SampledFunction a) { return a *= s; }
SampledFunction operator-(SampledFunction a) { return a *= -1.0; }

SampledFunction operator/(const SampledFunction& a, const SampledFunction& b) {
  require_same_grid(a, b, "operator/");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = b[i] == 0.0 ? kNaN : a[i] / b[i];
  return SampledFunction(a.grid_ptr(), std::move(v));
}

bool same_grid(const SampledFunction& a, const SampledFunction& b) noexcept {
  return a.grid() == b.grid();
}

void require_same_grid(const SampledFunction& a, const SampledFunction& b, const char* where) {
  if (!same_grid(a, b)) {
    throw std::invalid_argument(std::string(where) + ": functions live on different grids");
  }
}

// Calculus ------------------------------------------------------------------

SampledFunction derivative(const SampledFunction& f, int order, Accuracy accuracy) {
  if (order != 1 && order != 2) {
    throw std::invalid_argument("derivative: order must be 1 or 2");
  }
  const std::size_t n = f.size();
  if (n < 5) throw std::invalid_argument("derivative: need at least 5 points");
  const double h = f.grid().spacing();
  const auto y = f.values();
  std::vector<double> d(n);

  if (order == 1) {
    const double s = 1.0 / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) * s;
    const double e = 1.0 / (6.0 * h);
    d[0] = (-11.0 * y[0] + 18.0 * y[1] - 9.0 * y[2] + 2.0 * y[3]) * e;
    d[n - 1] = (11.0 * y[n - 1] - 18.0 * y[n - 2] + 9.0 * y[n - 3] - 2.0 * y[n - 4]) * e;
    if (accuracy == Accuracy::fourth) {
      const double t = 1.0 / (12.0 * h);
      for (std::size_t i = 2; i + 2 < n; ++i) {
        d[i] = (-y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]) * t;
      }
    }
  } else {
    const double s = 1.0 / (h * h);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - 2.0 * y[i] + y[i - 1]) * s;
    d[0] = (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) * s;
    d[n - 1] = (2.0 * y[n - 1] - 5.0 * y[n - 2] + 4.0 * y[n - 3] - y[n - 4]) * s;
    if (accuracy == Accuracy::fourth) {
      const double t = 1.0 / (12.0 * h * h);
      for (std::size_t i = 2; i + 2 < n; ++i) {
        d[i] = (-y[i + 2] + 16.0 * y[i + 1] - 30.0 * y[i] + 16.0 * y[i - 1] - y[i - 2]) * t;
      }
    }
  }
  return SampledFunction(f.grid_ptr(), std::move(d));
}

double default_anchor(const Grid& grid) noexcept {
  return grid.contains(0.0) ? 0.0 : grid.x_min();
}

namespace {

// Linear interpolation of tabulated values at x inside the grid.
double interpolate(const Grid& g, std::span<const double> v, double x) {
  const double r = (x - g.x_min()) / g.spacing();
  auto i = static_cast<std::size_t>(std::clamp(std::floor(r), 0.0, double(g.size() - 2)));
  const double t = (x - g[i]) / g.spacing();
  return (1.0 - t) * v[i] + t * v[i + 1];
}

}  // namespace

SampledFunction integrate_cumulative(const SampledFunction& f, std::optional<double> anchor) {
  const Grid& g = f.grid();
  const double a = anchor.value_or(default_anchor(g));
  if (!g.contains(a)) {
    throw std::invalid_argument("integrate_cumulative: anchor outside the grid");
  }
  const double h = g.spacing();
  std::vector<double> F(f.size(), 0.0);
  for (std::size_t i = 1; i < F.size(); ++i) F[i] = F[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  const double shift = interpolate(g, F, a);
  for (double& v : F) v -= shift;
  return SampledFunction(f.grid_ptr(), std::move(F));
}

SampledFunction antiderivative(const std::function<double(double)>& f, GridPtr grid,
                               double anchor) {
  std::vector<double> nodes, weights;
  gauss_legendre(5, nodes, weights);
  auto cell = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    double s = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) s += weights[q] * f(c + r * nodes[q]);
    return s * r;
  };
  const Grid& g = *grid;
  std::vector<double> F(g.size(), 0.0);
  for (std::size_t i = 1; i < F.size(); ++i) F[i] = F[i - 1] + cell(g[i - 1], g[i]);

  double at_anchor;
  if (g.contains(anchor)) {
    std::size_t j = std::min(static_cast<std::size_t>((anchor - g.x_min()) / g.spacing()),
                             g.size() - 2);
    at_anchor = F[j] + (anchor > g[j] ? cell(g[j], anchor) : 0.0);
  } else if (anchor < g.x_min()) {
    at_anchor = -integrate_adaptive(f, anchor, g.x_min(), 1e-13, 1e-15);
  } else {
    at_anchor = F.back() + integrate_adaptive(f, g.x_max(), anchor, 1e-13, 1e-15);
  }
  for (double& v : F) v -= at_anchor;
  return SampledFunction(std::move(grid), std::move(F));
}

double inner_product(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f, g, "inner_product");
  const double h = f.grid().spacing();
  double s = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    const double a = f[i - 1] * g[i - 1], b = f[i] * g[i];
    if (finite(a) && finite(b)) s += 0.5 * h * (a + b);
  }
  return s;
}

double integrate(const SampledFunction& f) {
  const double h = f.grid().spacing();
  double s = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (finite(f[i - 1]) && finite(f[i])) s += 0.5 * h * (f[i - 1] + f[i]);
  }
  return s;
}

double l2_norm(const SampledFunction& f) { return std::sqrt(inner_product(f, f)); }

SampledFunction l2_normalize(const SampledFunction& f) {
  const double norm = l2_norm(f);
  if (!(norm > 0.0) || !finite(norm)) {
    throw DegenerateFunctionError("l2_normalize: function has zero norm");
  }
  const double peak = f.max_abs();
  double sign = 1.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (finite(f[i]) && std::abs(f[i]) > 1e-8 * peak) {
      sign = f[i] > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  return f * (sign / norm);
}

SampledFunction wronskian(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f, g, "wronskian");
  return f * derivative(g) - derivative(f) * g;
}

SampledFunction wronskian3(const SampledFunction& f, const SampledFunction& g,
                           const SampledFunction& k) {
  require_same_grid(f, g, "wronskian3");
  require_same_grid(f, k, "wronskian3");
  const auto f1 = derivative(f), g1 = derivative(g), k1 = derivative(k);
  const auto f2 = derivative(f, 2), g2 = derivative(g, 2), k2 = derivative(k, 2);
  std::vector<double> w(f.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = f[i] * (g1[i] * k2[i] - g2[i] * k1[i]) - g[i] * (f1[i] * k2[i] - f2[i] * k1[i]) +
           k[i] * (f1[i] * g2[i] - f2[i] * g1[i]);
  }
  return SampledFunction(f.grid_ptr(), std::move(w));
}

double interior_relative_norm(const SampledFunction& residual, const SampledFunction& reference,
                              std::size_t margin) {
  require_same_grid(residual, reference, "interior_relative_norm");
  double num = 0.0, den = 0.0;
  for (std::size_t i = margin; i + margin < residual.size(); ++i) {
    if (!finite(residual[i]) || !finite(reference[i])) continue;
    num += residual[i] * residual[i];
    den += reference[i] * reference[i];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

double interior_max_abs(const SampledFunction& f, std::size_t margin) {
  double m = 0.0;
  for (std::size_t i = margin; i + margin < f.size(); ++i) {
    if (finite(f[i])) m = std::max(m, std::abs(f[i]));
  }
  return m;
}

int count_nodes(const SampledFunction& f, double floor) {
  const double cut = floor * f.max_abs();
  int nodes = 0;
  int last = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = f[i];
    if (!finite(v) || std::abs(v) <= cut) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++nodes;
    last = s;
  }
  return nodes;
}

double observed_order(double coarse_error, double fine_error, double refinement) {
  return std::log(coarse_error / fine_error) / std::log(refinement);
}

}  // namespace pdmsusy
