#include "bikemono/transport.hpp"

#include <cmath>

namespace bikemono {

Mat2 connection_matrix(const Vec2& d1, double ell) {
  if (!(ell > 0)) throw NumericError("connection_matrix: ell must be positive");
  Mat2 a;
  const double s = -1.0 / (2.0 * ell);
  a << s * d1.x(), s * d1.y(), s * d1.y(), -s * d1.x();
  return a;
}

namespace {

void check_finite(const Sl2d& g) {
  if (!g.m.allFinite()) throw NumericError("transport: non-finite values");
}

void check_immersed(const PlaneCurve& c, double ta, double tb) {
  const double floor = 1e-14 * std::max(1.0, c.diameter());
  for (int i = 0; i <= 64; ++i)
    if (c.d1(ta + (tb - ta) * i / 64.0).norm() <= floor)
      throw ImmersionError("transport: curve is not immersed");
}

// One midpoint-Magnus pass; records (t, b) samples when out != nullptr.
Sl2d magnus_run(const PlaneCurve& c, double ell, double ta, double tb, int steps,
                TransportResult* out) {
  const double h = (tb - ta) / steps;
  Sl2d b;
  if (out) {
    out->t.reserve(steps + 1);
    out->b.reserve(steps + 1);
    out->t.push_back(ta);
    out->b.push_back(b);
  }
  for (int k = 0; k < steps; ++k) {
    const double tm = ta + (k + 0.5) * h;
    const Mat2 a = connection_matrix(c.d1(tm), ell);
    b = exp_traceless<double>(h * a) * b;
    if (out) {
      out->t.push_back(ta + (k + 1) * h);
      out->b.push_back(b);
    }
  }
  check_finite(b);
  return b;
}

}  // namespace

TransportResult transport_range(const PlaneCurve& c, double ell, double ta,
                                double tb, const TransportOptions& opt) {
  if (!(ell > 0)) throw NumericError("transport: ell must be positive");
  if (c.kind() == PlaneCurve::Kind::Polygon) {
    if (ta != c.t0() || tb != c.t1())
      throw CurveSpecError("transport_range: subranges of polygons not supported");
    const int spe = std::max(
        1, opt.steps / std::max<int>(1, static_cast<int>(c.path().vertices.size())));
    TransportResult r = transport_polygon(c.path(), ell,
                                          opt.record_samples ? spe : 1);
    if (!opt.record_samples) {
      r.t.clear();
      r.b.clear();
    }
    return r;
  }

  if (opt.steps < 64) throw NumericError("transport: need steps >= 64");
  check_immersed(c, ta, tb);

  int steps = opt.steps;
  double tr_coarse = magnus_run(c, ell, ta, tb, steps / 2, nullptr).trace();
  Sl2d fine = magnus_run(c, ell, ta, tb, steps, nullptr);
  double err = std::abs(tr_coarse - fine.trace());
  if (opt.auto_refine) {
    while (err > opt.err_target && 2 * steps <= opt.max_steps) {
      tr_coarse = fine.trace();
      steps *= 2;
      fine = magnus_run(c, ell, ta, tb, steps, nullptr);
      const double err_next = std::abs(tr_coarse - fine.trace());
      // second order gains ~4x per doubling; a stall means the rounding
      // floor (~ |tr| eps sqrt(steps)) has been reached
      const bool stalled = err_next > 0.6 * err;
      err = err_next;
      if (stalled) break;
    }
  }

  TransportResult r;
  r.ell = ell;
  r.steps = steps;
  r.error_estimate = err;
  r.trace_refined = (4.0 * fine.trace() - tr_coarse) / 3.0;
  if (opt.record_samples) {
    magnus_run(c, ell, ta, tb, steps, &r);
    r.monodromy = r.b.back();
  } else {
    r.monodromy = fine;
  }
  return r;
}

TransportResult transport_smooth(const PlaneCurve& c, double ell,
                                 const TransportOptions& opt) {
  return transport_range(c, ell, c.t0(), c.t1(), opt);
}

TransportResult transport_polygon(const PolygonPath& path, double ell,
                                  int samples_per_edge) {
  if (!(ell > 0)) throw NumericError("transport: ell must be positive");
  const size_t nv = path.vertices.size();
  if (nv < 2) throw CurveSpecError("transport_polygon: too few vertices");
  const size_t ne = path.closed ? nv : nv - 1;
  const int spe = std::max(1, samples_per_edge);
  using LMat = Eigen::Matrix<long double, 2, 2>;

  // Per-edge exponentials in closed form and the running product in extended
  // precision: strongly hyperbolic products would otherwise lose the 1e-10
  // agreement with the closed-form trace to cancellation.
  auto edge_exp = [&](const Vec2& dir, long double len) {
    const long double x = -dir.x() * len / (2 * ell), y = -dir.y() * len / (2 * ell);
    const long double d2 = x * x + y * y;  // -det of the traceless exponent
    const long double d = std::sqrt(d2);
    const long double c = std::cosh(d);
    const long double s = d > 1e-30L ? std::sinh(d) / d : 1.0L + d2 / 6.0L;
    LMat m;
    m << c + s * x, s * y, s * y, c - s * x;
    return m;
  };

  TransportResult r;
  r.ell = ell;
  r.steps = static_cast<int>(ne);
  r.t.push_back(0.0);
  r.b.emplace_back();
  LMat b = LMat::Identity();
  double s = 0;
  double scale = 0;
  for (const auto& v : path.vertices) scale = std::max(scale, v.norm());
  for (size_t i = 0; i < ne; ++i) {
    const Vec2 a = path.vertices[i], q = path.vertices[(i + 1) % nv];
    const double len = (q - a).norm();
    if (len <= 1e-12 * std::max(scale, 1.0))
      throw CurveSpecError("transport_polygon: degenerate edge");
    const Vec2 dir = (q - a) / len;
    for (int j = 1; j <= spe; ++j) {
      LMat bj = edge_exp(dir, static_cast<long double>(len) * j / spe) * b;
      bj /= std::sqrt(bj(0, 0) * bj(1, 1) - bj(0, 1) * bj(1, 0));
      r.t.push_back(s + len * j / spe);
      r.b.push_back(Sl2d(bj.cast<double>()));
    }
    b = edge_exp(dir, len) * b;
    b /= std::sqrt(b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0));
    s += len;
  }
  r.monodromy = Sl2d(b.cast<double>());
  check_finite(r.monodromy);
  r.error_estimate = 0.0;
  r.trace_refined = r.monodromy.trace();
  return r;
}

double op_norm_2x2(const Mat2& m) {
  Eigen::JacobiSVD<Mat2> svd(m);
  return svd.singularValues()(0);
}

ConvergenceStudy polygonal_convergence(const PlaneCurve& c,
                                       const std::vector<int>& ns, double ell) {
  if (!c.closed()) throw CurveSpecError("polygonal_convergence: closed curves only");
  for (size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1])
      throw CurveSpecError("polygonal_convergence: ns must increase");

  TransportOptions ref_opt{.steps = 1 << 15, .record_samples = false,
                           .auto_refine = true, .err_target = 1e-10,
                           .max_steps = 1 << 18};
  const Sl2d ref = transport_smooth(c, ell, ref_opt).monodromy;

  // inscribe at uniform arclength (constant-speed vertex spacing)
  const PlaneCurve unit =
      c.kind() == PlaneCurve::Kind::Polygon || c.is_unit_speed(1e-9)
          ? c
          : arclength_reparam(c, std::max(4096, 4 * ns.back()));

  ConvergenceStudy out;
  out.ns = ns;
  out.ref_norm = op_norm_2x2(ref.m);
  for (int n : ns) {
    PolygonPath p;
    p.closed = true;
    p.vertices.reserve(n);
    for (int k = 0; k < n; ++k)
      p.vertices.push_back(unit.position(unit.t0() + unit.span() * k / n));
    const Sl2d tn = transport_polygon(p, ell).monodromy;
    out.errors.push_back(op_norm_2x2(tn.m - ref.m));
  }
  for (size_t i = 0; i + 1 < out.errors.size(); ++i) {
    const double e0 = out.errors[i], e1 = out.errors[i + 1];
    const double dn = std::log2(static_cast<double>(ns[i + 1]) / ns[i]);
    out.orders.push_back(e0 > 0 && e1 > 0 ? std::log2(e0 / e1) / dn : 0.0);
  }
  return out;
}

MonodromyReport monodromy(const PlaneCurve& c, double ell,
                          const MonodromySettings& s) {
  if (!c.closed()) throw CurveSpecError("monodromy: curve must be closed");
  TransportOptions opt = s.transport;
  opt.record_samples = false;
  const TransportResult tr = transport_smooth(c, ell, opt);

  MonodromyReport rep;
  rep.matrix = tr.monodromy;
  rep.trace = tr.monodromy.trace();
  rep.ell = ell;
  rep.curve = c.name();
  rep.error_estimate = tr.error_estimate;
  rep.steps = tr.steps;
  rep.tol_used = std::max(s.tol, 10.0 * tr.error_estimate);
  rep.cls = classify(tr.monodromy, rep.tol_used);
  if (rep.cls.type == Sl2Class::Hyperbolic || rep.cls.type == Sl2Class::Parabolic)
    rep.fixed = fixed_directions(tr.monodromy, rep.tol_used);
  return rep;
}

}  // namespace bikemono
