#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bikemono/backtrack.hpp"
#include "bikemono/corpus.hpp"
#include "bikemono/curve.hpp"
#include "bikemono/transport.hpp"

namespace bikemono {

struct AxisSpec {
  double min = 0;
  double max = 1;
  int count = 2;

  double at(int i) const {
    if (count < 2) return min;
    return i == count - 1 ? max : min + (max - min) * i / (count - 1);
  }
};

struct PhaseCell {
  double a = 0, b = 0;
  double trace = 0;              // numeric trace (polygon product for rects)
  double trace_closed_form = 0;  // rectangles only
  bool has_closed_form = false;
  Sl2Class cls = Sl2Class::Parabolic;
  double margin = 0;
  bool marginal = false;  // |margin| within the integrator noise band
};

struct PhaseGrid {
  AxisSpec a_axis, b_axis;
  double ell = 1;
  std::string provenance;  // "closed-form+numeric" | "numeric"
  std::vector<PhaseCell> cells;  // row-major, a fastest
  double max_closed_form_mismatch = 0;

  const PhaseCell& at(int ia, int ib) const { return cells[ib * a_axis.count + ia]; }
};

struct ScanSettings {
  double tol = 1e-7;
  int steps = 1 << 12;
  double err_target = 1e-7;
  int max_steps = 1 << 16;
  int threads = 1;
};

/// Trace of the rectangle monodromy in closed form: 2 - sinh^2(a/2) sinh^2(b/2).
double rect_trace_closed_form(double a, double b);

/// Rectangle phase diagram; every cell evaluated both by the closed form and
/// by the exact polygon product, which must agree.
PhaseGrid scan_rectangles(const AxisSpec& a, const AxisSpec& b,
                          const ScanSettings& s = {});

/// Ellipse phase diagram at bike length ell (numeric).
PhaseGrid scan_ellipses(const AxisSpec& a, const AxisSpec& b, double ell = 1.0,
                        const ScanSettings& s = {});

struct SweepCell {
  double ell = 0;
  double trace = 0;
  Sl2Class cls = Sl2Class::Parabolic;
  double margin = 0;
  bool marginal = false;
  bool has_track = false;  // rho/mu attached (hyperbolic or parabolic cells)
  int rho = 0;
  int mu = 0;
  bool mu_reliable = false;
};

struct SweepTransition {
  double ell_star = 0;
  double width = 0;         // final bracket width
  Sl2Class class_lo = Sl2Class::Parabolic, class_hi = Sl2Class::Parabolic;
  double margin_at_star = 0;  // | |tr| - 2 | at ell_star
  bool confident = true;      // single sign change inside the bracket
};

struct SweepResult {
  std::string curve;
  double ell_min = 0, ell_max = 0;
  double bisection_tol = 0;
  std::vector<SweepCell> cells;
  std::vector<SweepTransition> transitions;
};

/// Class, trace and (where defined) rho/mu on an ell grid, with every class
/// change refined by bisection on |tr| - 2.
SweepResult sweep_bike_length(const PlaneCurve& c, double ell_min, double ell_max,
                              int n, double bisection_tol = 1e-6,
                              const ScanSettings& s = {});

struct SuiteViolation {
  std::string suite;
  std::string curve;  // reproducible shorthand
  double ell = 1;
  double trace = 0;
  double margin = 0;
  std::string detail;
};

struct TheoremSuiteReport {
  std::uint64_t seed = 0;
  int curvature_bound_tested = 0;
  int length_bound_tested = 0;
  int area_bound_tested = 0;
  int corollary_tested = 0;
  int marginal_excluded = 0;
  std::vector<SuiteViolation> violations;
  bool ok() const { return violations.empty(); }
};

struct SuiteSettings {
  std::uint64_t seed = 20250901;
  int curvature_count = 100;  // curves with max |kappa| <= 1
  int convex_count = 500;    // broad convex corpus (length and area bounds)
  int corollary_count = 6;  // curves swept in the scale parameter
  double tol = 1e-7;
  int threads = 1;
};

/// Falsifiable batch checks:
///  - curvature bound: every closed curve with max |kappa| <= 1 (not == 1)
///    classifies Hyperbolic;
///  - length bound: every convex Hyperbolic curve has L > 2 pi;
///  - area bound: every convex curve with area > pi classifies Hyperbolic;
///  - scaling: c * Gamma classifies Hyperbolic for c at and above the
///    curvature bound c0 = max |kappa|.
TheoremSuiteReport theorem_suites(const SuiteSettings& s = {});

struct HarnessCurveResult {
  std::string curve;
  std::vector<SweepCell> cells;
  int transitions = 0;  // confident class changes along the grid
  bool c1_ok = true;    // rho == 1 on all hyperbolic/parabolic cells
  bool c2_ok = true;    // single hyperbolic->elliptic transition
  bool inconclusive = false;  // grid could not bracket the transition
  int excluded_cells = 0;     // marginal or degenerate cells skipped
};

struct ConjectureReport {
  std::uint64_t seed = 0;
  int curves = 0;
  int inconclusive = 0;
  int excluded_cells = 0;
  int rejected_nonconvex = 0;  // inputs turned away at the convexity gate
  std::vector<std::string> rejected;
  std::vector<HarnessCurveResult> counterexamples;  // full per-curve state
  std::vector<HarnessCurveResult> results;
  bool ok() const { return counterexamples.empty(); }
};

struct HarnessSettings {
  std::uint64_t seed = 20250902;
  int curves = 50;
  int ell_cells = 14;
  double tol = 1e-7;
  int threads = 1;
};

/// Single-transition and rho = 1 checks over strictly convex random curves.
/// Counterexamples are reported with their full grid state, never repaired.
ConjectureReport conjecture_harness(const HarnessSettings& s = {});

/// Same harness over a caller-supplied corpus; non-convex inputs are
/// rejected at the gate and counted, not analyzed.
ConjectureReport conjecture_harness_on(const std::vector<PlaneCurve>& corpus,
                                       const HarnessSettings& s = {});

struct RectExtremals {
  double a_symmetric = 0;   // symmetric point on sinh(a/2) sinh(b/2) = 2
  double max_area = 0;      // max of a*b along the parabolic curve
  double min_perimeter = 0; // min of 2(a+b) along the parabolic curve
};

/// Numeric extremals of area and perimeter over the parabolic rectangle
/// family; nothing is hardcoded.
RectExtremals rect_parabolic_extremals();

}  // namespace bikemono
