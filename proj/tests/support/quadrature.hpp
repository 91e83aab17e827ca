#pragma once

// Test-side adaptive Simpson quadrature: the independent oracle for lengths
// and areas, kept separate from the library's Gauss-Legendre path.

#include <cmath>
#include <functional>

namespace testsupport {

inline double simpson_cell(const std::function<double(double)>& f, double a,
                           double b) {
  return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f,
                                   double a, double b, double whole, double eps,
                                   int depth) {
  const double c = 0.5 * (a + b);
  const double left = simpson_cell(f, a, c);
  const double right = simpson_cell(f, c, b);
  if (depth > 48 || std::abs(left + right - whole) < 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, c, left, eps / 2, depth + 1) +
         adaptive_simpson_rec(f, c, b, right, eps / 2, depth + 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double eps = 1e-12) {
  return adaptive_simpson_rec(f, a, b, simpson_cell(f, a, b), eps, 0);
}

}  // namespace testsupport
