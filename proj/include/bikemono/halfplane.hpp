#pragma once

#include <cmath>
#include <complex>

#include "bikemono/sl2.hpp"

namespace bikemono {

/// Hyperbolic distance in the upper half-plane model (curvature -1):
/// d = arccosh(1 + |z-w|^2 / (2 Im z Im w)).
template <typename S>
S hyp_distance(std::complex<S> z, std::complex<S> w) {
  if (!(z.imag() > S(0)) || !(w.imag() > S(0)))
    throw NumericError("hyp_distance: points must lie in the open upper half-plane");
  const S q = std::norm(z - w) / (S(2) * z.imag() * w.imag());
  // acosh(1 + q) written as log1p for stability near q = 0
  return std::log1p(q + std::sqrt(q * (q + S(2))));
}

/// Moebius action of an SL2 element on the upper half-plane,
/// z -> (m11 z + m12) / (m21 z + m22).
template <typename S>
std::complex<S> moebius_half_plane(const Sl2<S>& g, std::complex<S> z) {
  if (!(z.imag() > S(0)))
    throw NumericError("moebius_half_plane: point must lie in the upper half-plane");
  return (g.m(0, 0) * z + g.m(0, 1)) / (g.m(1, 0) * z + g.m(1, 1));
}

/// Cayley transform onto the Poincare disk, z -> (z - i)/(z + i).
template <typename S>
std::complex<S> cayley_disk(std::complex<S> z) {
  const std::complex<S> i(S(0), S(1));
  return (z - i) / (z + i);
}

}  // namespace bikemono
