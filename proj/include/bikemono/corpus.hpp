#pragma once

#include <cstdint>
#include <vector>

#include "bikemono/curve.hpp"
#include "bikemono/rng.hpp"

namespace bikemono {

struct ConvexCurveOptions {
  double r0_min = 0.35;
  double r0_max = 2.2;
  int max_harmonic = 5;      // support-function terms k = 2..max_harmonic
  double shape_budget = 0.8; // fraction of r0 spent on harmonics, at most
};

/// Strictly convex closed curve from a random support function. Convexity
/// holds by construction: the harmonic amplitudes are scaled so the
/// curvature radius h + h'' stays bounded away from zero.
PlaneCurve random_convex_curve(Rng& rng, const ConvexCurveOptions& opt = {});

std::vector<PlaneCurve> random_convex_curves(int count, std::uint64_t seed,
                                             const ConvexCurveOptions& opt = {});

/// Convex curve with max |kappa| <= 1 and |kappa| not identically 1
/// (curvature radius >= min_radius > 1 everywhere).
PlaneCurve random_low_curvature_curve(Rng& rng, double min_radius = 1.02);

/// Open unit-speed arc with a strictly positive random curvature profile,
/// arc length <= max_len, total turning <= max_turn. Samples carry exact
/// derivatives; positions are accumulated by Gauss-Legendre quadrature.
PlaneCurve random_convex_arc(Rng& rng, double max_len = 3.0,
                             double max_turn = 2.9, int samples = 1 << 14);

/// Near-straight arc (curvature ~ kappa_scale) for equality-edge cases.
PlaneCurve nearly_straight_arc(Rng& rng, double len, double kappa_scale);

}  // namespace bikemono
