#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pdmsusy/numerics.hpp"

namespace pdmsusy {

/// Interval with optionally open ends; infinite ends are always open.
struct Interval {
  double lo;
  double hi;
  bool lo_open = true;
  bool hi_open = true;

  bool contains(double x) const noexcept;
  /// True when every point of `g` lies in the interval.
  bool covers(const Grid& g) const noexcept;
  /// True when x lies in the closure of the interval.
  bool closure_contains(double x) const noexcept;
};

/// An effective mass m(x) with analytic first and second derivatives.
///
/// Evaluating outside the domain throws std::domain_error.
class MassProfile {
 public:
  using Fn = std::function<double(double)>;

  MassProfile(Fn m, Fn m1, Fn m2, Interval domain, std::string label);

  double m(double x) const;
  double m1(double x) const;
  double m2(double x) const;

  const Interval& domain() const noexcept { return domain_; }
  const std::string& label() const noexcept { return label_; }

  SampledFunction sample_m(const GridPtr& g) const;
  SampledFunction sample_m1(const GridPtr& g) const;
  SampledFunction sample_m2(const GridPtr& g) const;

  /// Throws std::domain_error unless the whole grid is inside the domain.
  void require_grid(const Grid& g, const char* where) const;

 private:
  void check(double x) const;

  Fn m_, m1_, m2_;
  Interval domain_;
  std::string label_;
};

/// m(x) = m0 on the whole real line.
MassProfile constant_profile(double m0);
/// m(x) = x^2/2 + m0, m0 > 0.
MassProfile quadratic_profile(double m0);
/// m(x) = cos x + m0, m0 > 1.
MassProfile cosine_profile(double m0);
/// m(x) = x on (0, inf).
MassProfile linear_profile();

/// Not-a-knot cubic spline through (x, m) samples; at least 16 samples with
/// strictly increasing x and positive m.
MassProfile tabulated_profile(const std::vector<std::pair<double, double>>& samples,
                              std::string label = "tabulated");

/// Reads a two-column CSV with header `x,m`.
MassProfile read_tabulated_profile(const std::filesystem::path& path);

/// von Roos ordering constants; construction enforces alpha + beta + gamma = -1.
class OrderingParameters {
 public:
  OrderingParameters(double alpha, double beta, double gamma);

  static OrderingParameters ben_daniel_duke() { return {0.0, -1.0, 0.0}; }

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }

 private:
  double alpha_, beta_, gamma_;
};

/// V_eff = V + hbar^2 [(1+b) m''/(4m^2) - (a^2+ab+a+b+1) m'^2/(2m^3)].
SampledFunction veff_from_ordering(const SampledFunction& v, const MassProfile& profile,
                                   const OrderingParameters& ordering, double hbar = 1.0);

/// Inverse of veff_from_ordering.
SampledFunction v_from_veff(const SampledFunction& veff, const MassProfile& profile,
                            const OrderingParameters& ordering, double hbar = 1.0);

}  // namespace pdmsusy
