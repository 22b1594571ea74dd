#pragma once

#include <cstddef>
#include <vector>

namespace pdmsusy {

/// Real symmetric tridiagonal matrix: diag has n entries, off has n-1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const noexcept { return diag.size(); }
  /// y = T x.
  std::vector<double> multiply(const std::vector<double>& x) const;
};

/// Number of eigenvalues strictly below lambda (Sturm sequence count).
std::size_t sturm_count(const SymTridiagonal& t, double lambda);

struct Eigenpairs {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // unit Euclidean norm
};

/// The k lowest eigenpairs by Sturm bisection and inverse iteration.
/// Throws SolverError when inverse iteration fails to converge.
Eigenpairs lowest_eigenpairs(const SymTridiagonal& t, std::size_t k);

/// Solves (T - shift I) x = b by Gaussian elimination with partial pivoting.
std::vector<double> solve_shifted(const SymTridiagonal& t, double shift, std::vector<double> b);

}  // namespace pdmsusy
