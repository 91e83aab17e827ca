#pragma once

// Test-side oracle: a hyperbolic "turtle" chaining geodesic steps and turns
// as SL2 isometries. Independent of the transport path, it gives exact
// polygon developments (law-of-cosines chaining in matrix form).

#include <cmath>
#include <complex>

#include "bikemono/halfplane.hpp"
#include "bikemono/sl2.hpp"

namespace testsupport {

// The frame g maps the reference state (point i, direction "up") to the
// current state. step() translates along the vertical geodesic in the
// reference frame; turn() rotates the tangent at i by beta (the Moebius
// derivative of the rotation block R(phi) at i is e^{-2 i phi}).
struct HypTurtle {
  bikemono::Sl2d g;

  static bikemono::Sl2d translate(double d) {
    return bikemono::Sl2d(std::exp(d / 2), 0, 0, std::exp(-d / 2));
  }

  static bikemono::Sl2d rotate(double beta) {
    const double h = -beta / 2;
    return bikemono::Sl2d(std::cos(h), -std::sin(h), std::sin(h), std::cos(h));
  }

  void step(double d) { g = g * translate(d); }
  void turn(double beta) { g = g * rotate(beta); }

  std::complex<double> pos() const {
    return bikemono::moebius_half_plane(g, std::complex<double>(0, 1));
  }
};

}  // namespace testsupport
