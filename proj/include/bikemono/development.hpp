#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "bikemono/curve.hpp"
#include "bikemono/halfplane.hpp"
#include "bikemono/sl2.hpp"
#include "bikemono/transport.hpp"

namespace bikemono {

/// Hyperbolic development z(t) = b(t)^{-1} . i in the upper half-plane.
///
/// Sign convention: the development carries geodesic curvature -ell * kappa
/// of its source (the orientation of the half-plane is opposite to the one
/// induced from the plane). Nothing downstream depends on the reflection:
/// distances, intersections and the period-map class are all invariant.
struct Development {
  std::vector<double> t;
  std::vector<std::complex<double>> z;
  Sl2d period_map;        // b(L)^{-1}, closed sources only
  bool has_period_map = false;
  double ell = 1;
  std::string source_name;
  std::optional<PlaneCurve> source;  // unit-speed curve actually developed
  int steps = 0;
  double error_estimate = 0;
};

struct DevelopOptions {
  int steps = 1 << 12;
  /// Resampling size when the source is not unit speed;
  /// 0 = max(2 * steps, 2^15).
  int reparam_n = 0;
};

/// Develops a front track (bike length ell). Non-unit-speed sources are
/// arclength-resampled first, so samples advance at hyperbolic speed 1/ell.
Development develop(const PlaneCurve& c, double ell = 1.0,
                    const DevelopOptions& opt = {});

/// Sup over interior samples of |kappa_dev(t) + ell * kappa_source(t)| with
/// finite-difference derivatives of the development.
double curvature_transfer_check(const Development& dev);

struct ChordPair {
  double euclidean;   // |Gamma(b) - Gamma(a)|
  double hyperbolic;  // distance between the developed endpoints
};

/// Chord comparison for an open arc (bike length 1).
ChordPair chord_pair(const PlaneCurve& arc, double ell = 1.0);

enum class IntersectStatus { NoIntersection, Intersection, Inconclusive };

struct IntersectReport {
  IntersectStatus status = IntersectStatus::NoIntersection;
  double t_a = 0, t_b = 0;  // witness parameters (periods unrolled)
  double min_gap = 0;       // smallest segment gap seen among candidate pairs
  double delta = 0;         // separation tolerance used
};

/// Extends the development over `window` periods with powers of the period
/// map and tests all non-adjacent polyline segments in the Poincare disk.
/// Nearest approach inside (delta, 10 delta) is reported Inconclusive.
IntersectReport self_intersects(const Development& dev, int window,
                                double delta = 0.0);

}  // namespace bikemono
