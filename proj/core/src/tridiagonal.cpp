#include "pdmsusy/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pdmsusy/errors.hpp"

namespace pdmsusy {

std::vector<double> SymTridiagonal::multiply(const std::vector<double>& x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += off[i - 1] * x[i - 1];
    if (i + 1 < n) s += off[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

std::size_t sturm_count(const SymTridiagonal& t, double lambda) {
  constexpr double kTiny = 1e-300;
  std::size_t count = 0;
  double q = t.diag[0] - lambda;
  for (std::size_t i = 0;; ++i) {
    if (q == 0.0) q = -kTiny;
    if (q < 0.0) ++count;
    if (i + 1 == t.size()) break;
    q = t.diag[i + 1] - lambda - t.off[i] * t.off[i] / q;
  }
  return count;
}

std::vector<double> solve_shifted(const SymTridiagonal& t, double shift, std::vector<double> b) {
  const std::size_t n = t.size();
  // Row i after pivoting holds entries in columns i, i+1, i+2.
  std::vector<double> a0(n), a1(n, 0.0), a2(n, 0.0), sub(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    a0[i] = t.diag[i] - shift;
    if (i + 1 < n) {
      a1[i] = t.off[i];
      sub[i + 1] = t.off[i];
    }
  }
  const double floor = std::numeric_limits<double>::epsilon() *
                       (1.0 + *std::max_element(a0.begin(), a0.end(),
                                                [](double x, double y) {
                                                  return std::abs(x) < std::abs(y);
                                                }));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double l = sub[i + 1];
    if (std::abs(l) > std::abs(a0[i])) {
      // Swap rows i and i+1. Row i+1 is (l, diag, off) in columns i, i+1, i+2.
      const double r0 = l, r1 = a0[i + 1], r2 = a1[i + 1];
      l = a0[i];
      const double s1 = a1[i], s2 = a2[i];
      a0[i] = r0;
      a1[i] = r1;
      a2[i] = r2;
      a0[i + 1] = s1;
      a1[i + 1] = s2;
      std::swap(b[i], b[i + 1]);
    }
    if (a0[i] == 0.0) a0[i] = floor;
    const double f = l / a0[i];
    a0[i + 1] -= f * a1[i];
    a1[i + 1] -= f * a2[i];
    b[i + 1] -= f * b[i];
  }
  if (a0[n - 1] == 0.0) a0[n - 1] = floor;
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    if (i + 1 < n) s -= a1[i] * x[i + 1];
    if (i + 2 < n) s -= a2[i] * x[i + 2];
    x[i] = s / a0[i];
  }
  return x;
}

namespace {

double kth_eigenvalue(const SymTridiagonal& t, std::size_t k, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(t, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  for (double& x : v) x /= s;
}

}  // namespace

Eigenpairs lowest_eigenpairs(const SymTridiagonal& t, std::size_t k) {
  const std::size_t n = t.size();
  if (k == 0 || k > n) throw std::invalid_argument("lowest_eigenpairs: invalid k");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.off[i - 1]);
    if (i + 1 < n) r += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double scale = std::max(std::abs(lo), std::abs(hi));
  lo -= 1e-12 * scale + 1e-300;
  hi += 1e-12 * scale + 1e-300;

  Eigenpairs out;
  for (std::size_t j = 0; j < k; ++j) {
    const double lambda = kth_eigenvalue(t, j, lo, hi);
    out.values.push_back(lambda);

    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * std::sin(0.7 * double(i) + double(j));
    normalize(v);
    const double shift = lambda + 4.0 * std::numeric_limits<double>::epsilon() * scale;
    bool converged = false;
    int it = 0;
    for (; it < 20 && !converged; ++it) {
      std::vector<double> w = solve_shifted(t, shift, v);
      // Keep clustered vectors orthogonal to those already accepted.
      for (std::size_t p = 0; p < j; ++p) {
        if (std::abs(out.values[p] - lambda) > 1e-8 * (1.0 + scale)) continue;
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d += w[i] * out.vectors[p][i];
        for (std::size_t i = 0; i < n; ++i) w[i] -= d * out.vectors[p][i];
      }
      normalize(w);
      double change = 0.0, dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += w[i] * v[i];
      const double sgn = dot < 0.0 ? -1.0 : 1.0;
      for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(w[i] * sgn - v[i]));
      v = std::move(w);
      if (sgn < 0.0) {
        for (double& x : v) x = -x;
      }
      converged = change < 1e-13 && it > 0;
    }
    const auto tv = t.multiply(v);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(tv[i] - lambda * v[i]));
    if (!converged && res > 1e-9 * (1.0 + scale)) {
      throw SolverError("inverse iteration did not converge for eigenvalue " + std::to_string(j) +
                            " (residual " + std::to_string(res) + ")",
                        it);
    }
    out.vectors.push_back(std::move(v));
  }
  return out;
}

}  // namespace pdmsusy
