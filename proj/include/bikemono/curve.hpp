#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bikemono/errors.hpp"
#include "bikemono/sl2.hpp"

namespace bikemono {

/// Ordered vertex list; for closed paths the first vertex is not repeated.
struct PolygonPath {
  std::vector<Vec2> vertices;
  bool closed = true;
};

/// Named curve description: kind plus scalar and array parameters. This is
/// the unit that reproduction records serialize, so it must round-trip.
struct CurveSpec {
  std::string kind;
  std::map<std::string, double> params;
  std::map<std::string, std::vector<double>> arrays;

  /// Canonical one-line form, e.g. "ellipse:2,1". Parses back bit-exactly.
  std::string shorthand() const;
};

/// Immutable parametrized plane curve with first and second derivatives.
///
/// Three kinds: analytic (callable position/d1/d2), polygon (arclength
/// parametrization over the edges), and sampled (uniform grid, cubic Hermite
/// evaluation between nodes). All evaluation is const and thread-safe.
class PlaneCurve {
 public:
  enum class Kind { Analytic, Polygon, Sampled };
  using Fn = std::function<Vec2(double)>;

  static constexpr int kDefaultSamplesHint = 4096;

  static PlaneCurve analytic(std::string name, Fn pos, Fn d1, Fn d2, double t0,
                             double t1, bool closed,
                             int samples_hint = kDefaultSamplesHint);
  static PlaneCurve polygon(std::string name, PolygonPath path);
  /// Uniform samples; derivatives by fourth-order finite differences.
  static PlaneCurve sampled(std::string name, std::vector<Vec2> positions,
                            double t0, double t1, bool closed);
  /// Uniform samples with externally supplied derivative arrays.
  static PlaneCurve sampled_with_derivatives(std::string name,
                                             std::vector<Vec2> positions,
                                             std::vector<Vec2> d1,
                                             std::vector<Vec2> d2, double t0,
                                             double t1, bool closed);

  Kind kind() const;
  const std::string& name() const;
  double t0() const;
  double t1() const;
  double span() const;
  bool closed() const;
  int samples_hint() const;

  Vec2 position(double t) const;
  Vec2 d1(double t) const;
  Vec2 d2(double t) const;

  /// Polygon kind only.
  const PolygonPath& path() const;

  /// Probes a few parameters for |d1| == 1.
  bool is_unit_speed(double tol = 1e-9) const;

  /// Bounding-box diagonal estimate, cached at construction.
  double diameter() const;

  /// Same closed analytic curve, parametrized from t0 + delta.
  PlaneCurve with_basepoint(double delta) const;

  /// The curve c * Gamma.
  PlaneCurve scaled(double c) const;

  /// Construction spec when the curve came from make_named_curve.
  const CurveSpec* spec() const;

  struct Data;

 private:
  std::shared_ptr<const Data> d_;
  explicit PlaneCurve(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  friend PlaneCurve make_named_curve(const CurveSpec&);
};

/// Builds one of the named curves:
///   circle:r           unit-speed circle of radius r
///   ellipse:a,b        (a cos t, b sin t)
///   rect:a,b           axis-aligned rectangle polygon
///   segment:len[,ang]  open straight segment, unit speed
///   fish               the closed front track paired with the two-cusp
///                      wave front (2 cos t, sin 2t sin^2 t) at bike length 1
///   eight              figure-eight (sin 2t, sin t)
///   fourier:...        trigonometric polynomial curve (arrays ax,bx,ay,by)
///   convex:...         strictly convex curve from a support function
///                      r0 + sum_{k>=2} (a_k cos k phi + b_k sin k phi)
PlaneCurve make_named_curve(const CurveSpec& spec);

/// Signed curvature at t: cross(d1, d2)/|d1|^3.
double curvature(const PlaneCurve& c, double t);

/// Largest |curvature| over a dense sample (analytic/sampled kinds).
double max_abs_curvature(const PlaneCurve& c, int n = 0);

/// Arc length by composite Gauss-Legendre quadrature (exact for polygons).
double curve_length(const PlaneCurve& c);

/// Signed enclosed area of a closed curve (surveyor's formula).
double signed_area(const PlaneCurve& c);

/// Unit-speed resampling with n intervals; derivatives carried over by the
/// chain rule so node speed is exactly 1.
PlaneCurve arclength_reparam(const PlaneCurve& c, int n);

struct GlobalInvariants {
  double length = 0;
  double area = 0;
  int rotation_number = 0;    // turning number of d1
  double rotation_residual = 0;  // pre-rounding distance to the integer
  bool convex = false;
  double max_abs_kappa = 0;
  double min_kappa = 0;
};

/// Length, signed area, turning number and convexity of a closed immersed
/// curve. Angle unwrapping refines the grid (x2, up to 2^20) until every
/// step is below pi/2.
GlobalInvariants global_invariants(const PlaneCurve& c);

/// Turning number of d1 alone (same unwrapping rules).
int turning_number(const PlaneCurve& c, double* residual = nullptr);

}  // namespace bikemono
