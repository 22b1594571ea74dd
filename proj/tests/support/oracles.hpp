#pragma once

// Closed forms used as independent references in the tests. Nothing here
// calls into the library.

#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/special_functions/ellint_2.hpp>
#include <boost/math/special_functions/hermite.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

/// E[phi | k] with k the parameter; Boost takes the modulus sqrt(k).
inline double ellint_e(double phi, double k) {
  if (k >= 0.0) return boost::math::ellint_2(std::sqrt(k), phi);
  // Negative parameter: integrate directly.
  auto f = [k](double t) { return std::sqrt(1.0 - k * std::sin(t) * std::sin(t)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, phi, 15, 1e-15);
}

inline double hermite(int n, double x) { return boost::math::hermite(static_cast<unsigned>(n), x); }

/// m = cos x + m0.
struct Cosine {
  double m0;
  double delta = 1.0;

  double m(double x) const { return m0 + std::cos(x); }
  double e(double x) const { return ellint_e(0.5 * x, 2.0 / (m0 + 1.0)); }
  double ee(double x) const { return (m0 + 1.0) * e(x) * e(x); }
  double s(double x) const { return 2.0 * std::sqrt(m0 + 1.0) * e(x); }

  double v(double x) const {
    const double mm = m(x);
    return (128.0 * delta * delta * ee(x) +
            (-8.0 * m0 * std::cos(x) + 3.0 * std::cos(2.0 * x) - 11.0) / (mm * mm * mm)) /
           64.0;
  }
  double psi0(double x) const { return std::pow(m(x), 0.25) * std::exp(-2.0 * delta * ee(x)); }

  double w1(double x) const {
    const double r = std::sqrt(m0 + 1.0), ex = e(x), mm = m(x);
    return delta * std::sqrt(2.0) * r * ex - 1.0 / (2.0 * std::sqrt(2.0) * r * ex) +
           std::sin(x) / (4.0 * std::sqrt(2.0) * std::pow(mm, 1.5));
  }
  double v1(double x) const {
    const double c = std::cos(x), mm = m(x), q = ee(x);
    return delta + 2.0 * delta * delta * q + (3.0 * c * c - 7.0 - 4.0 * m0 * c) / (32.0 * mm * mm * mm) +
           1.0 / (4.0 * q);
  }
  double w2(double x) const {
    const double r = std::sqrt(m0 + 1.0), ex = e(x), mm = m(x), q = ee(x);
    const double den = 1.0 + 8.0 * delta * q;
    return std::sin(x) / (4.0 * std::sqrt(2.0) * std::pow(mm, 1.5)) +
           8.0 * std::sqrt(2.0) * delta * delta * r * r * r * ex * ex * ex / den +
           (1.0 - 4.0 * delta * q) / (2.0 * std::sqrt(2.0) * r * ex * den);
  }
  double v2(double x) const {
    const double mm = m(x), q = ee(x);
    const double den = 1.0 + 8.0 * delta * q;
    return 2.0 * delta * delta * q +
           (-8.0 * m0 * std::cos(x) + 3.0 * std::cos(2.0 * x) - 11.0) / (64.0 * mm * mm * mm) +
           (-2.0 * delta + 64.0 * delta * delta * q * (1.0 + 2.0 * delta * q)) / (den * den);
  }
};

/// m = x^2/2 + m0.
struct Quadratic {
  double m0;
  double delta = 1.0;

  double m(double x) const { return 0.5 * x * x + m0; }
  /// Antiderivative of sqrt(m) vanishing at 0.
  double s(double x) const {
    const double a = std::sqrt(2.0 * m0);
    return (0.5 * x * std::sqrt(x * x + a * a) + 0.5 * a * a * std::asinh(x / a)) / std::sqrt(2.0);
  }
  /// Potential written with log(sqrt(2 m0 + x^2) + x), i.e. with S shifted
  /// by m0 log(2 m0)/(2 sqrt 2) relative to s().
  double v_shifted(double x) const {
    const double q = 2.0 * m0 + x * x, r = std::sqrt(q), l = std::log(r + x), d2 = delta * delta;
    return m0 * d2 * x * x / 8.0 + d2 * x * x * x * x / 16.0 - 5.0 / (4.0 * q * q) +
           7.0 * m0 / (2.0 * q * q * q) + 0.25 * m0 * m0 * d2 * l * l + 0.25 * m0 * d2 * x * r * l;
  }
  /// Point where the shifted antiderivative vanishes.
  double shifted_anchor() const {
    auto f = [this](double x) {
      const double r = std::sqrt(2.0 * m0 + x * x);
      return x * r + 2.0 * m0 * std::log(r + x);
    };
    double lo = -10.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  }
};

/// m = x on (0, inf), antiderivative anchored at 0.
struct Linear {
  double delta = 1.0;
  double s(double x) const { return 2.0 / 3.0 * std::pow(x, 1.5); }
  double v(double x) const {
    return (64.0 * delta * delta * x * x * x / 3.0 - 21.0 / (x * x * x)) / 96.0;
  }
  double psi0(double x) const { return std::pow(x, 0.25) * std::exp(-2.0 * delta * x * x * x / 9.0); }
};

/// Unnormalized ladder eigenstate m^{1/4} H_n(sqrt(delta) S / hbar) exp(-delta S^2 / 2 hbar^2).
inline double ladder_state(int n, double m, double s, double delta, double hbar = 1.0) {
  const double y = std::sqrt(delta) * s / hbar;
  return std::pow(m, 0.25) * hermite(n, y) * std::exp(-0.5 * y * y);
}

/// Samples and L2-normalizes (trapezoid). Unless `keep_sign`, the first
/// significant value is made positive.
inline std::vector<double> normalized(const std::vector<double>& x,
                                      const std::function<double(double)>& f,
                                      bool keep_sign = false) {
  std::vector<double> v(x.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    v[i] = f(x[i]);
    peak = std::max(peak, std::abs(v[i]));
  }
  const double h = x[1] - x[0];
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = (i == 0 || i + 1 == x.size()) ? 0.5 : 1.0;
    sum += w * v[i] * v[i];
  }
  double scale = 1.0 / std::sqrt(sum * h);
  for (double y : v) {
    if (keep_sign) break;
    if (std::abs(y) > 1e-8 * peak) {
      if (y < 0.0) scale = -scale;
      break;
    }
  }
  for (double& y : v) y *= scale;
  return v;
}

}  // namespace oracle
