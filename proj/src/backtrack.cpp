#include "bikemono/backtrack.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bikemono {

namespace {

constexpr double kPi = std::numbers::pi;

// Calibration of the Maslov winding orientation: fixed once so that the
// fish front at ell = 1 carries mu = +2, then frozen. See the calibration
// test next to this module.
constexpr int kMaslovOrientation = -1;

double rhs(const PlaneCurve& c, double ell, double t, double theta) {
  const Vec2 v = c.d1(t);
  return (v.x() * std::sin(theta) - v.y() * std::cos(theta)) / ell;
}

double wrap_to_pi(double a) {
  a = std::fmod(a, 2 * kPi);
  if (a > kPi) a -= 2 * kPi;
  if (a < -kPi) a += 2 * kPi;
  return a;
}

}  // namespace

// TODO: step polygon curves edge-exactly through the edge exponentials;
// RK4 across the corner discontinuities drops to first order there.
std::vector<double> theta_flow(const PlaneCurve& c, double ell, double theta0,
                               const ThetaFlowOptions& opt) {
  if (!(ell > 0)) throw NumericError("theta_flow: ell must be positive");
  if (opt.steps < 16) throw NumericError("theta_flow: too few steps");
  const int n = opt.steps;
  std::vector<double> theta(n + 1);

  if (!opt.backward) {
    const double h = c.span() / n;
    theta[0] = theta0;
    for (int k = 0; k < n; ++k) {
      const double t = c.t0() + k * h;
      const double y = theta[k];
      const double k1 = rhs(c, ell, t, y);
      const double k2 = rhs(c, ell, t + h / 2, y + h / 2 * k1);
      const double k3 = rhs(c, ell, t + h / 2, y + h / 2 * k2);
      const double k4 = rhs(c, ell, t + h, y + h * k3);
      theta[k + 1] = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return theta;
  }

  // integrate tau = t1 - t downward; the flow reversed in time
  const double h = c.span() / n;
  theta[n] = theta0;
  for (int k = n; k > 0; --k) {
    const double t = c.t0() + k * h;
    const double y = theta[k];
    const double k1 = -rhs(c, ell, t, y);
    const double k2 = -rhs(c, ell, t - h / 2, y + h / 2 * k1);
    const double k3 = -rhs(c, ell, t - h / 2, y + h / 2 * k2);
    const double k4 = -rhs(c, ell, t - h, y + h * k3);
    theta[k - 1] = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return theta;
}

namespace {

// Hermite evaluation of theta(t) inside grid cell [k, k+1], with exact
// slopes from the flow equation; used to refine cusp locations.
struct ThetaInterp {
  const PlaneCurve& c;
  double ell;
  const std::vector<double>& th;
  double t0, h;

  double operator()(double t) const {
    double x = (t - t0) / h;
    const size_t n = th.size() - 1;
    size_t i = std::min(static_cast<size_t>(std::max(0.0, std::floor(x))), n - 1);
    const double s = x - i;
    const double y0 = th[i], y1 = th[i + 1];
    const double m0 = h * rhs(c, ell, t0 + i * h, y0);
    const double m1 = h * rhs(c, ell, t0 + (i + 1) * h, y1);
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
  }
};

}  // namespace

BackTrack build_back_track(const PlaneCurve& c, double ell, double theta0,
                           Stability branch, bool integrate_backward, int steps) {
  BackTrack bt;
  bt.ell = ell;
  bt.branch = branch;

  ThetaFlowOptions fopt;
  fopt.steps = steps;
  fopt.backward = integrate_backward;
  bt.theta = theta_flow(c, ell, theta0, fopt);
  bt.theta0 = bt.theta.front();

  const int n = steps;
  const double h = c.span() / n;
  bt.t.resize(n + 1);
  bt.gamma.resize(n + 1);
  bt.s.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double t = c.t0() + k * h;
    const double th = bt.theta[k];
    const Vec2 r(std::cos(th), std::sin(th));
    bt.t[k] = t;
    bt.gamma[k] = c.position(t) + ell * r;
    bt.s[k] = c.d1(t).dot(r);
  }

  // closure residuals
  bt.closure_pos_gap = (bt.gamma.back() - bt.gamma.front()).norm();
  const double dtheta = bt.theta.back() - bt.theta.front();
  bt.closure_angle_gap = std::abs(wrap_to_pi(dtheta));
  bt.closes = c.closed() &&
              bt.closure_pos_gap < 1e-6 * std::max(c.diameter(), 1e-12) &&
              bt.closure_angle_gap < 1e-6;

  // no-skid residual by centered differences of theta
  double worst = 0;
  for (int k = 1; k < n; ++k) {
    const double th_d = (bt.theta[k + 1] - bt.theta[k - 1]) / (2 * h);
    const Vec2 v = c.d1(bt.t[k]);
    const double expect = v.x() * std::sin(bt.theta[k]) - v.y() * std::cos(bt.theta[k]);
    worst = std::max(worst, std::abs(ell * th_d - expect));
  }
  bt.noskid_residual = worst;

  // rotation number of the frame
  const double turns = dtheta / (2 * kPi);
  bt.rho = static_cast<int>(std::lround(turns));
  bt.rho_residual = std::abs(turns - bt.rho);

  // cusps: transversal zeros of the rear speed
  const ThetaInterp interp{c, ell, bt.theta, c.t0(), h};
  auto speed_at = [&](double t) {
    const double th = interp(t);
    return c.d1(t).dot(Vec2(std::cos(th), std::sin(th)));
  };
  auto dspeed_at = [&](double t) {
    const double th = interp(t);
    const Vec2 r(std::cos(th), std::sin(th));
    const Vec2 ir(-std::sin(th), std::cos(th));
    return c.d2(t).dot(r) + rhs(c, ell, t, th) * c.d1(t).dot(ir);
  };
  double max_ds = 0;
  for (int k = 0; k <= n; k += std::max(1, n / 512))
    max_ds = std::max(max_ds, std::abs(dspeed_at(bt.t[k])));
  for (int k = 0; k < n; ++k) {
    const double s0 = bt.s[k], s1 = bt.s[k + 1];
    if (s0 == 0.0 && k > 0) continue;
    if (!(s0 * s1 < 0.0 || (s0 == 0.0 && s1 != 0.0))) continue;
    double lo = bt.t[k], hi = bt.t[k + 1];
    double flo = s0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = speed_at(mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    const double tstar = 0.5 * (lo + hi);
    const double ds = dspeed_at(tstar);
    const double thp = rhs(c, ell, tstar, interp(tstar));
    Cusp cusp;
    cusp.t = tstar;
    cusp.degenerate = std::abs(ds) < 1e-6 * std::max(max_ds, 1e-300);
    cusp.sign = (ds * thp) >= 0 ? 1 : -1;
    bt.cusps.push_back(cusp);
  }

  // Maslov index: winding of the loop (s, ell theta') around the origin.
  // The loop never hits the origin for an immersed front since
  // s^2 + (ell theta')^2 = |Gamma'|^2.
  double angle_total = 0;
  double prev = std::atan2(ell * rhs(c, ell, bt.t[0], bt.theta[0]), bt.s[0]);
  for (int k = 1; k <= n; ++k) {
    const double a = std::atan2(ell * rhs(c, ell, bt.t[k], bt.theta[k]), bt.s[k]);
    angle_total += wrap_to_pi(a - prev);
    prev = a;
  }
  const double winding = angle_total / (2 * kPi);
  const long w = std::lround(winding);
  bt.maslov = static_cast<int>(2 * kMaslovOrientation * w);
  bt.maslov_reliable = std::abs(winding - w) < 1e-3;
  for (const auto& cu : bt.cusps)
    if (cu.degenerate) bt.maslov_reliable = false;

  if (bt.maslov_reliable) {
    int sum = 0;
    for (const auto& cu : bt.cusps) sum += cu.sign;
    bt.cusp_sign_mismatch = (sum != bt.maslov);
  }
  return bt;
}

namespace {

double closure_misfit(const PlaneCurve& c, double ell, double theta0, int steps) {
  ThetaFlowOptions o;
  o.steps = steps;
  const auto th = theta_flow(c, ell, theta0, o);
  return std::abs(wrap_to_pi(th.back() - th.front()));
}

// Near a parabolic monodromy the eigenvector only pins the fixed angle to
// sqrt(matrix error). The flow itself is far more accurate, so refine
// theta0 by minimizing the closure misfit directly.
double polish_theta0(const PlaneCurve& c, double ell, double theta0, int steps) {
  const int flow_steps = std::min(steps, 1 << 14);
  auto misfit = [&](double th) { return closure_misfit(c, ell, th, flow_steps); };

  double lo = theta0 - 0.02, hi = theta0 + 0.02;
  double best = theta0, bestv = misfit(theta0);
  const int m = 20;
  for (int i = 0; i <= m; ++i) {
    const double x = lo + (hi - lo) * i / m;
    const double v = misfit(x);
    if (v < bestv) {
      bestv = v;
      best = x;
    }
  }
  double a = best - (hi - lo) / m, b = best + (hi - lo) / m;
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = misfit(x1), f2 = misfit(x2);
  for (int it = 0; it < 48; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = misfit(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = misfit(x2);
    }
  }
  const double polished = 0.5 * (a + b);
  return misfit(polished) <= bestv ? polished : best;
}

}  // namespace

std::vector<BackTrack> closed_back_tracks(const PlaneCurve& c, double ell,
                                          const BackTrackOptions& opt) {
  if (!c.closed()) throw CurveSpecError("closed_back_tracks: curve must be closed");
  const MonodromyReport rep = monodromy(c, ell, opt.monodromy);
  if (opt.require_margin > 0 && std::abs(rep.cls.margin) < opt.require_margin &&
      rep.cls.type != Sl2Class::Identity) {
    throw MarginalClassification(rep.cls.margin,
                                 "closed_back_tracks: margin " +
                                     std::to_string(rep.cls.margin) +
                                     " below required " +
                                     std::to_string(opt.require_margin));
  }

  std::vector<BackTrack> out;
  switch (rep.cls.type) {
    case Sl2Class::Elliptic:
    case Sl2Class::Identity:
      break;
    case Sl2Class::Parabolic: {
      const double th0 = polish_theta0(c, ell, rep.fixed.at(0).theta, opt.steps);
      out.push_back(
          build_back_track(c, ell, th0, Stability::Neutral, false, opt.steps));
      break;
    }
    case Sl2Class::Hyperbolic:
      out.push_back(build_back_track(c, ell, rep.fixed.at(0).theta,
                                     Stability::Attracting, false, opt.steps));
      out.push_back(build_back_track(c, ell, rep.fixed.at(1).theta,
                                     Stability::Repelling, true, opt.steps));
      break;
  }
  return out;
}

int rotation_number_rear(const BackTrack& bt) {
  if (bt.rho_residual >= 1e-3)
    throw SamplingError("rotation_number_rear: residual " +
                        std::to_string(bt.rho_residual) +
                        " too large; track may not close");
  return bt.rho;
}

int rot_identity_residual(const PlaneCurve& front, const BackTrack& bt) {
  const int rho_front = turning_number(front);
  return rho_front - bt.rho - bt.maslov / 2;
}

LengthBound length_bound_check(const PlaneCurve& front, const BackTrack& bt,
                               double ell) {
  LengthBound lb;
  lb.length = curve_length(front);
  lb.rhs = 2 * kPi * ell * std::abs(bt.rho);
  lb.ok = lb.length >= lb.rhs - 1e-8;

  bool is_circle_ell = false;
  if (std::abs(lb.length - lb.rhs) < 1e-6) {
    Vec2 centroid(0, 0);
    const int m = 64;
    for (int i = 0; i < m; ++i)
      centroid += front.position(front.t0() + front.span() * i / m);
    centroid /= m;
    is_circle_ell = true;
    for (int i = 0; i < m; ++i) {
      const double r =
          (front.position(front.t0() + front.span() * i / m) - centroid).norm();
      if (std::abs(r - ell) > 1e-6) {
        is_circle_ell = false;
        break;
      }
    }
  }
  lb.equality = std::abs(lb.length - lb.rhs) < 1e-6 && is_circle_ell;
  return lb;
}

}  // namespace bikemono
