#pragma once

#include <string>
#include <vector>

#include "bikemono/curve.hpp"
#include "bikemono/sl2.hpp"

namespace bikemono {

/// Traceless coefficient of the transport equation b' = A(t) b, scaled for
/// bike length ell:  A = -(1/(2 ell)) [[x', y'], [y', -x']].
Mat2 connection_matrix(const Vec2& d1, double ell);

struct TransportOptions {
  int steps = 1 << 14;       // midpoint-Magnus steps over the full range
  bool record_samples = true;
  bool auto_refine = false;  // double steps until err_target or max_steps
  double err_target = 1e-8;
  int max_steps = 1 << 20;
};

/// Transport samples along a front track. Every b(t) is in SL2 exactly up
/// to floating point (each step is the exponential of a traceless matrix).
struct TransportResult {
  std::vector<double> t;  // sample parameters (empty when not recorded)
  std::vector<Sl2d> b;    // b(t) with b(t0) = identity
  Sl2d monodromy;         // transport over the whole range
  double ell = 1;
  int steps = 0;
  double error_estimate = 0;  // |trace at steps/2 - trace at steps|
  double trace_refined = 0;   // Richardson extrapolation of the trace
};

/// Transport over [curve.t0, curve.t1]. Polygon curves are delegated to the
/// exact per-edge product.
TransportResult transport_smooth(const PlaneCurve& c, double ell,
                                 const TransportOptions& opt = {});

/// Transport over an arbitrary subrange [ta, tb].
TransportResult transport_range(const PlaneCurve& c, double ell, double ta,
                                double tb, const TransportOptions& opt = {});

/// Exact product of per-edge exponentials in traversal order. No
/// discretization error beyond floating point. samples_per_edge > 1 records
/// exact intermediate transports inside each edge.
TransportResult transport_polygon(const PolygonPath& path, double ell,
                                  int samples_per_edge = 1);

struct ConvergenceStudy {
  std::vector<int> ns;
  std::vector<double> errors;  // operator norm ||T(Gamma_n) - T(Gamma)||
  std::vector<double> orders;  // empirical order between consecutive ns
  double ref_norm = 0;         // ||T(Gamma)||, for relative readings
};

/// Inscribed-polygon transports against a high-resolution smooth reference.
ConvergenceStudy polygonal_convergence(const PlaneCurve& c,
                                       const std::vector<int>& ns, double ell);

struct MonodromySettings {
  double tol = 1e-7;  // user floor for the parabolic band on |tr| - 2
  TransportOptions transport{.steps = 1 << 14, .record_samples = false,
                             .auto_refine = true, .err_target = 1e-8};
};

struct MonodromyReport {
  Sl2d matrix;
  double trace = 0;
  Classification cls{Sl2Class::Identity, 0, 0};
  std::vector<FixedDirection> fixed;
  double ell = 1;
  std::string curve;
  double tol_used = 0;  // max(user tol, 10 x error estimate)
  double error_estimate = 0;
  int steps = 0;
};

/// Monodromy of a closed front track, classified at
/// max(settings.tol, 10 * error_estimate).
MonodromyReport monodromy(const PlaneCurve& c, double ell,
                          const MonodromySettings& s = {});

/// Largest singular value.
double op_norm_2x2(const Mat2& m);

}  // namespace bikemono
