#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "crmm/error.hpp"

namespace crmm {

// Small polynomial and dense-solve helpers shared by the coded-computation
// decoders.  Coefficient vectors are in ascending order: c[k] multiplies x^k.

// Coefficients of prod_i (x - roots[i]).
inline std::vector<double> poly_from_roots(const std::vector<double>& roots) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    c.push_back(0.0);
    for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
    c[0] = -r * c[0];
  }
  return c;
}

// Quotient of a polynomial by (x - root); the remainder is discarded.
inline std::vector<double> synthetic_division(const std::vector<double>& c, double root) {
  std::vector<double> q(c.size() - 1, 0.0);
  double carry = c.back();
  for (std::size_t k = c.size() - 1; k > 0; --k) {
    q[k - 1] = carry;
    carry = c[k - 1] + root * carry;
  }
  return q;
}

inline double poly_eval(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k > 0; --k) acc = acc * x + c[k - 1];
  return acc;
}

// Solve a dense square system in place (partial pivoting).  Returns false on
// (numerical) singularity.  a is row-major n x n, b has length n and receives
// the solution.
inline bool solve_dense(std::vector<double> a, std::vector<double>& b) {
  const std::size_t n = b.size();
  if (a.size() != n * n) throw Error(errc::dimension_mismatch, "solve_dense: bad shape");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::fabs(a[perm[col] * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::fabs(a[perm[r] * n + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return false;
    std::swap(perm[col], perm[piv]);
    const double d = a[perm[col] * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[perm[r] * n + col] / d;
      if (f == 0.0) continue;
      a[perm[r] * n + col] = 0.0;
      for (std::size_t k = col + 1; k < n; ++k) a[perm[r] * n + k] -= f * a[perm[col] * n + k];
      b[perm[r]] -= f * b[perm[col]];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i > 0; --i) {
    const std::size_t row = perm[i - 1];
    double acc = b[row];
    for (std::size_t k = i; k < n; ++k) acc -= a[row * n + k] * x[k];
    const double d = a[row * n + i - 1];
    if (d == 0.0) return false;
    x[i - 1] = acc / d;
  }
  b = std::move(x);
  return true;
}

// Chebyshev points of the first kind on (-1, 1); pairwise distinct.
inline std::vector<double> chebyshev_points(std::size_t n) {
  std::vector<double> x(n);
  const double pi = 3.14159265358979323846;
  for (std::size_t i = 0; i < n; ++i)
    x[i] = std::cos(pi * (2.0 * static_cast<double>(i) + 1.0) /
                    (2.0 * static_cast<double>(n)));
  return x;
}

}  // namespace crmm
