#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pdmsusy/numerics.hpp"

namespace pdmsusy {

namespace {

double integral_from_zero(double phi, double k) {
  auto integrand = [k](double t) {
    const double s = std::sin(t);
    return std::sqrt(std::max(0.0, 1.0 - k * s * s));
  };
  return integrate_adaptive(integrand, 0.0, phi, 1e-14, 1e-16);
}

}  // namespace

double complete_elliptic_e(double k) {
  if (!(k <= 1.0)) throw std::domain_error("complete_elliptic_e: parameter k must be <= 1");
  return integral_from_zero(std::numbers::pi / 2, k);
}

double incomplete_elliptic_e(double phi, double k) {
  if (!std::isfinite(phi) || !std::isfinite(k)) {
    throw std::invalid_argument("incomplete_elliptic_e: non-finite argument");
  }
  if (phi == 0.0) return 0.0;
  if (k > 1.0) {
    const double branch = std::asin(1.0 / std::sqrt(k));
    if (std::abs(phi) > branch) {
      throw std::domain_error("incomplete_elliptic_e: phi beyond the real branch for k > 1");
    }
    return integral_from_zero(phi, k);
  }
  const double j = std::round(phi / std::numbers::pi);
  const double r = phi - j * std::numbers::pi;
  const double base = j == 0.0 ? 0.0 : 2.0 * j * complete_elliptic_e(k);
  return base + integral_from_zero(r, k);
}

}  // namespace pdmsusy
