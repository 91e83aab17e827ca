#include "bikemono/development.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace bikemono {

namespace {

using C = std::complex<double>;

// Geodesic curvature in the upper half-plane for an arbitrary-speed curve:
// kappa = y (x'y'' - y'x'') / |z'|^3 + x' / |z'|.
double halfplane_curvature(const C& z, const C& dz, const C& ddz) {
  const double v = std::abs(dz);
  const double cross = dz.real() * ddz.imag() - dz.imag() * ddz.real();
  return z.imag() * cross / (v * v * v) + dz.real() / v;
}

}  // namespace

Development develop(const PlaneCurve& c, double ell, const DevelopOptions& opt) {
  Development dev;
  dev.ell = ell;
  dev.source_name = c.name();

  if (c.kind() == PlaneCurve::Kind::Polygon) {
    const int spe =
        std::max(1, opt.steps / std::max<int>(1, (int)c.path().vertices.size()));
    TransportResult tr = transport_polygon(c.path(), ell, spe);
    dev.steps = tr.steps;
    dev.error_estimate = 0;
    dev.t = tr.t;
    dev.z.reserve(tr.b.size());
    for (const auto& b : tr.b)
      dev.z.push_back(moebius_half_plane(b.inverse(), C(0, 1)));
    if (c.closed()) {
      dev.period_map = tr.monodromy.inverse();
      dev.has_period_map = true;
    }
    dev.source = c;
    return dev;
  }

  PlaneCurve unit =
      c.is_unit_speed(1e-9)
          ? c
          : arclength_reparam(c, opt.reparam_n > 0
                                     ? opt.reparam_n
                                     : std::max(2 * opt.steps, 1 << 15));
  TransportOptions topt;
  topt.steps = opt.steps;
  topt.record_samples = true;
  TransportResult tr = transport_smooth(unit, ell, topt);

  dev.steps = tr.steps;
  dev.error_estimate = tr.error_estimate;
  dev.t = tr.t;
  dev.z.reserve(tr.b.size());
  for (const auto& b : tr.b)
    dev.z.push_back(moebius_half_plane(b.inverse(), C(0, 1)));
  if (unit.closed()) {
    // The period map carries the classification; refine it beyond the sample
    // resolution, on the original curve (the monodromy does not depend on
    // the parametrization, and the original has exact derivatives).
    TransportOptions popt;
    popt.steps = opt.steps;
    popt.record_samples = false;
    popt.auto_refine = true;
    popt.err_target = 1e-9;
    popt.max_steps = 1 << 18;
    const TransportResult fine = transport_smooth(c, ell, popt);
    dev.period_map = fine.monodromy.inverse();
    dev.has_period_map = true;
    dev.error_estimate = fine.error_estimate;
  }
  dev.source = std::move(unit);
  return dev;
}

double curvature_transfer_check(const Development& dev) {
  const size_t n = dev.z.size();
  if (n < (1 << 12) + 1)
    throw SamplingError("curvature_transfer_check: need at least 2^12 samples");
  if (!dev.source) throw NumericError("curvature_transfer_check: source missing");
  const double h = dev.t[1] - dev.t[0];
  double worst = 0;
  for (size_t k = 1; k + 1 < n; ++k) {
    const C dz = (dev.z[k + 1] - dev.z[k - 1]) / (2 * h);
    const C ddz = (dev.z[k + 1] - 2.0 * dev.z[k] + dev.z[k - 1]) / (h * h);
    const double ktilde = halfplane_curvature(dev.z[k], dz, ddz);
    const double ksrc = curvature(*dev.source, dev.t[k]);
    worst = std::max(worst, std::abs(ktilde + dev.ell * ksrc));
  }
  return worst;
}

ChordPair chord_pair(const PlaneCurve& arc, double ell) {
  if (arc.closed()) throw CurveSpecError("chord_pair: expects an open arc");
  ChordPair out;
  out.euclidean = (arc.position(arc.t1()) - arc.position(arc.t0())).norm();
  DevelopOptions opt;
  opt.steps = 1 << 13;
  const Development dev = develop(arc, ell, opt);
  out.hyperbolic = hyp_distance(dev.z.front(), dev.z.back());
  return out;
}

namespace {

struct Seg {
  Vec2 a, b;
  size_t idx;  // global polyline index
};

// Distance between two segments; sets `crossing` when they properly cross.
double seg_seg_distance(const Vec2& p1, const Vec2& p2, const Vec2& q1,
                        const Vec2& q2, bool* crossing) {
  auto cross = [](const Vec2& u, const Vec2& v) {
    return u.x() * v.y() - u.y() * v.x();
  };
  const Vec2 d1 = p2 - p1, d2 = q2 - q1;
  const double c1 = cross(d1, q1 - p1), c2 = cross(d1, q2 - p1);
  const double c3 = cross(d2, p1 - q1), c4 = cross(d2, p2 - q1);
  if (crossing)
    *crossing = ((c1 > 0) != (c2 > 0)) && ((c3 > 0) != (c4 > 0)) &&
                (c1 != 0 || c2 != 0) && (c3 != 0 || c4 != 0);
  auto point_seg = [](const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    const double u = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    return (p - (a + u * ab)).norm();
  };
  if (crossing && *crossing) return 0.0;
  return std::min(std::min(point_seg(p1, q1, q2), point_seg(p2, q1, q2)),
                  std::min(point_seg(q1, p1, p2), point_seg(q2, p1, p2)));
}

}  // namespace

IntersectReport self_intersects(const Development& dev, int window, double delta) {
  if (!dev.has_period_map)
    throw CurveSpecError("self_intersects: development of a closed source required");
  if (window < 1) throw CurveSpecError("self_intersects: window must be >= 1");

  const size_t n = dev.z.size();
  const double period = dev.t.back() - dev.t.front();

  // Unroll the sample set over `window` periods with powers of h. Chords are
  // tested in the Poincare disk (crossings are conformally exact there);
  // separations are measured hyperbolically, since the euclidean disk
  // metric collapses near the boundary.
  std::vector<Vec2> pts;
  std::vector<double> conf;  // local factor 2/(1-|w|^2)
  pts.reserve(window * (n - 1) + 1);
  conf.reserve(window * (n - 1) + 1);
  Sl2d hp;  // h^m, renormalized by the Sl2 product
  double hyp_diam = 0;
  for (int m = 0; m < window; ++m) {
    const size_t last = (m == window - 1) ? n : n - 1;
    for (size_t k = 0; k < last; ++k) {
      const C z = m == 0 ? dev.z[k] : moebius_half_plane(hp, dev.z[k]);
      const C w = cayley_disk(z);
      pts.emplace_back(w.real(), w.imag());
      conf.push_back(2.0 / std::max(1.0 - std::norm(w), 1e-300));
      hyp_diam = std::max(hyp_diam, hyp_distance(dev.z.front(), z));
    }
    hp = dev.period_map * hp;
  }
  hyp_diam = std::max(2 * hyp_diam, 1e-12);
  if (delta <= 0) delta = 1e-6 * hyp_diam;

  Vec2 lo = pts[0], hi = pts[0];
  double max_len = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    lo = lo.cwiseMin(pts[i]);
    hi = hi.cwiseMax(pts[i]);
    if (i) max_len = std::max(max_len, (pts[i] - pts[i - 1]).norm());
  }

  IntersectReport rep;
  rep.delta = delta;
  rep.min_gap = 1e300;

  const double cell = std::max(max_len + delta, 1e-12);
  auto cell_key = [&](long ix, long iy) {
    return (static_cast<long long>(ix) << 32) ^ (iy & 0xffffffffLL);
  };
  std::unordered_map<long long, std::vector<size_t>> grid;
  const size_t nseg = pts.size() - 1;
  for (size_t s = 0; s < nseg; ++s) {
    const Vec2 mid = 0.5 * (pts[s] + pts[s + 1]);
    grid[cell_key(static_cast<long>(std::floor((mid.x() - lo.x()) / cell)),
                  static_cast<long>(std::floor((mid.y() - lo.y()) / cell)))]
        .push_back(s);
  }

  auto param_of = [&](size_t s) {
    const size_t per = s / (n - 1), k = s % (n - 1);
    return per * period + (dev.t[k] - dev.t.front());
  };

  for (size_t s = 0; s < nseg; ++s) {
    const Vec2 mid = 0.5 * (pts[s] + pts[s + 1]);
    const long ix = static_cast<long>(std::floor((mid.x() - lo.x()) / cell));
    const long iy = static_cast<long>(std::floor((mid.y() - lo.y()) / cell));
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy) {
        auto it = grid.find(cell_key(ix + dx, iy + dy));
        if (it == grid.end()) continue;
        for (size_t other : it->second) {
          if (other <= s + 1) continue;  // each pair once; skip adjacent
          // parameter-nearby pieces of an immersed curve approach at the
          // sagitta scale and never cross; skip them
          if (param_of(other) - param_of(s) <= 0.01 * period) continue;
          // segments collapsed below double resolution carry no usable
          // geometry (deep boundary compression)
          if ((pts[s + 1] - pts[s]).squaredNorm() < 1e-26 ||
              (pts[other + 1] - pts[other]).squaredNorm() < 1e-26)
            continue;
          bool crossing = false;
          const double d = seg_seg_distance(pts[s], pts[s + 1], pts[other],
                                            pts[other + 1], &crossing);
          const double scale =
              std::max(std::max(conf[s], conf[s + 1]),
                       std::max(conf[other], conf[other + 1]));
          const double d_hyp = d * scale;
          if (!crossing) rep.min_gap = std::min(rep.min_gap, d_hyp);
          if (crossing || d_hyp <= delta) {
            rep.status = IntersectStatus::Intersection;
            rep.t_a = param_of(s);
            rep.t_b = param_of(other);
            return rep;
          }
        }
      }
  }
  if (rep.min_gap < 10 * delta) rep.status = IntersectStatus::Inconclusive;
  return rep;
}

}  // namespace bikemono
