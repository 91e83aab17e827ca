#include "bikemono/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace bikemono {

namespace {

constexpr double kPi = std::numbers::pi;

// 7-point Gauss-Legendre rule on [-1, 1].
constexpr double kGlX[7] = {0.0,
                            -0.4058451513773972, 0.4058451513773972,
                            -0.7415311855993945, 0.7415311855993945,
                            -0.9491079123427585, 0.9491079123427585};
constexpr double kGlW[7] = {0.4179591836734694,
                            0.3818300505051189, 0.3818300505051189,
                            0.2797053914892766, 0.2797053914892766,
                            0.1294849661688697, 0.1294849661688697};

double wrap_angle_diff(double a) {
  while (a > kPi) a -= 2 * kPi;
  while (a < -kPi) a += 2 * kPi;
  return a;
}

std::string fmt_params(const std::vector<double>& v) {
  std::string out;
  char buf[40];
  for (size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    if (i) out += ',';
    out += buf;
  }
  return out;
}

}  // namespace

struct PlaneCurve::Data {
  Kind kind;
  std::string name;
  double t0 = 0, t1 = 1;
  bool closed = false;
  int hint = kDefaultSamplesHint;
  double diam = 0;

  // analytic
  Fn pos, d1f, d2f;

  // polygon
  PolygonPath path;
  std::vector<double> cum;  // cumulative edge lengths, cum[0] = 0

  // sampled
  std::vector<Vec2> sp, sd1, sd2;
  double sh = 0;  // grid step

  std::shared_ptr<CurveSpec> spec;

  double wrap(double t) const {
    if (!closed) return std::clamp(t, t0, t1);
    const double span = t1 - t0;
    double u = std::fmod(t - t0, span);
    if (u < 0) u += span;
    return t0 + u;
  }

  // Index of the polygon edge containing arclength parameter s in [0, P).
  size_t edge_at(double s) const {
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    size_t i = static_cast<size_t>(it - cum.begin());
    return i == 0 ? 0 : std::min(i - 1, path.vertices.size() - (closed ? 1 : 2));
  }

  Vec2 edge_dir(size_t i) const {
    const auto& v = path.vertices;
    const Vec2 a = v[i], b = v[(i + 1) % v.size()];
    return (b - a).normalized();
  }

  Vec2 eval_pos(double t) const {
    switch (kind) {
      case Kind::Analytic: return pos(t);
      case Kind::Polygon: {
        const double s = wrap(t);
        const size_t i = edge_at(s);
        return path.vertices[i] + (s - cum[i]) * edge_dir(i);
      }
      case Kind::Sampled: return sampled_eval(t, 0);
    }
    return Vec2::Zero();
  }

  Vec2 eval_d1(double t) const {
    switch (kind) {
      case Kind::Analytic: return d1f(t);
      case Kind::Polygon: return edge_dir(edge_at(wrap(t)));
      case Kind::Sampled: return sampled_eval(t, 1);
    }
    return Vec2::Zero();
  }

  Vec2 eval_d2(double t) const {
    switch (kind) {
      case Kind::Analytic: return d2f(t);
      case Kind::Polygon: return Vec2::Zero();
      case Kind::Sampled: return sampled_eval(t, 2);
    }
    return Vec2::Zero();
  }

  // Cubic Hermite between nodes; snaps to the node values when t hits the
  // grid so that exact stored derivatives are returned there.
  Vec2 sampled_eval(double t, int order) const {
    const double u = wrap(t);
    const size_t n = sp.size() - 1;
    double x = (u - t0) / sh;
    long k = std::lround(x);
    if (k >= 0 && static_cast<size_t>(k) <= n && std::abs(x - k) < 1e-9) {
      const size_t j = static_cast<size_t>(k);
      return order == 0 ? sp[j] : order == 1 ? sd1[j] : sd2[j];
    }
    size_t i = std::min(static_cast<size_t>(std::max(0.0, std::floor(x))), n - 1);
    const double s = x - i;
    const Vec2 &p0 = sp[i], &p1 = sp[i + 1];
    const Vec2 m0 = sh * sd1[i], m1 = sh * sd1[i + 1];
    if (order == 0) {
      const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
      const double h10 = s * (1 - s) * (1 - s);
      const double h01 = s * s * (3 - 2 * s);
      const double h11 = s * s * (s - 1);
      return h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1;
    }
    if (order == 1) {
      const double g00 = 6 * s * (s - 1);
      const double g10 = (1 - s) * (1 - 3 * s);
      const double g01 = -6 * s * (s - 1);
      const double g11 = s * (3 * s - 2);
      return (g00 * p0 + g10 * m0 + g01 * p1 + g11 * m1) / sh;
    }
    return (1 - s) * sd2[i] + s * sd2[i + 1];
  }
};

namespace {

double estimate_diameter(const PlaneCurve::Data& d) {
  Vec2 lo(1e300, 1e300), hi(-1e300, -1e300);
  const int n = 64;
  for (int i = 0; i <= n; ++i) {
    const Vec2 p = d.eval_pos(d.t0 + (d.t1 - d.t0) * i / n);
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

void check_closure(const PlaneCurve::Data& d) {
  if (!d.closed) return;
  const double gap = (d.eval_pos(d.t0) - d.eval_pos(d.t1)).norm();
  if (gap > 1e-12 * std::max(d.diam, 1e-30))
    throw CurveSpecError("closed curve endpoints differ by " + std::to_string(gap));
}

// Fourth-order finite differences on a uniform grid (periodic wrap for
// closed curves, one-sided stencils at open ends).
void fd_derivatives(const std::vector<Vec2>& p, double h, bool closed,
                    std::vector<Vec2>& d1, std::vector<Vec2>& d2) {
  const long n = static_cast<long>(p.size());
  d1.resize(p.size());
  d2.resize(p.size());
  auto at = [&](long i) -> const Vec2& {
    if (closed) {
      const long m = n - 1;  // last sample repeats the first
      long j = (i % m + m) % m;
      return p[static_cast<size_t>(j)];
    }
    return p[static_cast<size_t>(std::clamp(i, 0L, n - 1))];
  };
  for (long i = 0; i < n; ++i) {
    const bool interior = closed || (i >= 2 && i <= n - 3);
    if (interior) {
      d1[i] = (-at(i + 2) + 8 * at(i + 1) - 8 * at(i - 1) + at(i - 2)) / (12 * h);
      d2[i] = (-at(i + 2) + 16 * at(i + 1) - 30 * at(i) + 16 * at(i - 1) - at(i - 2)) /
              (12 * h * h);
    } else {
      const long s = i < 2 ? i : i - (n - 5);  // offset into one-sided stencil
      const long b = i < 2 ? 0 : n - 5;        // stencil base
      auto q = [&](long j) { return p[static_cast<size_t>(b + j)]; };
      // five-point one-sided fourth-order first derivative at offset s
      static const double c1[5][5] = {
          {-25. / 12, 4., -3., 4. / 3, -1. / 4},
          {-1. / 4, -5. / 6, 3. / 2, -1. / 2, 1. / 12},
          {1. / 12, -2. / 3, 0., 2. / 3, -1. / 12},
          {-1. / 12, 1. / 2, -3. / 2, 5. / 6, 1. / 4},
          {1. / 4, -4. / 3, 3., -4., 25. / 12}};
      static const double c2[5][5] = {
          {35. / 12, -26. / 3, 19. / 2, -14. / 3, 11. / 12},
          {11. / 12, -5. / 3, 1. / 2, 1. / 3, -1. / 12},
          {-1. / 12, 4. / 3, -5. / 2, 4. / 3, -1. / 12},
          {-1. / 12, 1. / 3, 1. / 2, -5. / 3, 11. / 12},
          {11. / 12, -14. / 3, 19. / 2, -26. / 3, 35. / 12}};
      Vec2 a1 = Vec2::Zero(), a2 = Vec2::Zero();
      for (long j = 0; j < 5; ++j) {
        a1 += c1[s][j] * q(j);
        a2 += c2[s][j] * q(j);
      }
      d1[i] = a1 / h;
      d2[i] = a2 / (h * h);
    }
  }
}

}  // namespace

PlaneCurve PlaneCurve::analytic(std::string name, Fn pos, Fn d1, Fn d2,
                                double t0, double t1, bool closed,
                                int samples_hint) {
  if (!(t1 > t0)) throw CurveSpecError("analytic curve: need t1 > t0");
  auto d = std::make_shared<Data>();
  d->kind = Kind::Analytic;
  d->name = std::move(name);
  d->pos = std::move(pos);
  d->d1f = std::move(d1);
  d->d2f = std::move(d2);
  d->t0 = t0;
  d->t1 = t1;
  d->closed = closed;
  d->hint = samples_hint;
  d->diam = estimate_diameter(*d);
  check_closure(*d);
  return PlaneCurve(std::move(d));
}

PlaneCurve PlaneCurve::polygon(std::string name, PolygonPath path) {
  const size_t nv = path.vertices.size();
  if (nv < 2 || (path.closed && nv < 3))
    throw CurveSpecError("polygon: too few vertices");
  auto d = std::make_shared<Data>();
  d->kind = Kind::Polygon;
  d->name = std::move(name);
  d->closed = path.closed;
  double scale = 0;
  for (const auto& v : path.vertices) scale = std::max(scale, v.norm());
  const size_t ne = path.closed ? nv : nv - 1;
  d->cum.assign(1, 0.0);
  for (size_t i = 0; i < ne; ++i) {
    const Vec2 a = path.vertices[i], b = path.vertices[(i + 1) % nv];
    const double len = (b - a).norm();
    if (len <= 1e-12 * std::max(scale, 1.0))
      throw CurveSpecError("polygon: degenerate edge " + std::to_string(i));
    d->cum.push_back(d->cum.back() + len);
  }
  if (path.closed && (path.vertices.front() - path.vertices.back()).norm() <=
                         1e-12 * std::max(scale, 1.0))
    throw CurveSpecError("closed polygon must not repeat the first vertex");
  d->path = std::move(path);
  d->t0 = 0;
  d->t1 = d->cum.back();
  d->diam = estimate_diameter(*d);
  return PlaneCurve(std::move(d));
}

PlaneCurve PlaneCurve::sampled(std::string name, std::vector<Vec2> positions,
                               double t0, double t1, bool closed) {
  if (positions.size() < 5) throw CurveSpecError("sampled curve: need >= 5 samples");
  std::vector<Vec2> d1, d2;
  fd_derivatives(positions, (t1 - t0) / (positions.size() - 1), closed, d1, d2);
  return sampled_with_derivatives(std::move(name), std::move(positions),
                                  std::move(d1), std::move(d2), t0, t1, closed);
}

PlaneCurve PlaneCurve::sampled_with_derivatives(std::string name,
                                                std::vector<Vec2> positions,
                                                std::vector<Vec2> d1,
                                                std::vector<Vec2> d2, double t0,
                                                double t1, bool closed) {
  if (positions.size() < 2 || d1.size() != positions.size() ||
      d2.size() != positions.size())
    throw CurveSpecError("sampled curve: inconsistent arrays");
  if (!(t1 > t0)) throw CurveSpecError("sampled curve: need t1 > t0");
  auto d = std::make_shared<Data>();
  d->kind = Kind::Sampled;
  d->name = std::move(name);
  d->sp = std::move(positions);
  d->sd1 = std::move(d1);
  d->sd2 = std::move(d2);
  d->t0 = t0;
  d->t1 = t1;
  d->closed = closed;
  d->sh = (t1 - t0) / (d->sp.size() - 1);
  d->hint = static_cast<int>(d->sp.size() - 1);
  for (const auto& v : d->sd1)
    if (v.norm() == 0.0) throw ImmersionError("sampled curve: zero derivative sample");
  d->diam = estimate_diameter(*d);
  check_closure(*d);
  return PlaneCurve(std::move(d));
}

PlaneCurve::Kind PlaneCurve::kind() const { return d_->kind; }
const std::string& PlaneCurve::name() const { return d_->name; }
double PlaneCurve::t0() const { return d_->t0; }
double PlaneCurve::t1() const { return d_->t1; }
double PlaneCurve::span() const { return d_->t1 - d_->t0; }
bool PlaneCurve::closed() const { return d_->closed; }
int PlaneCurve::samples_hint() const { return d_->hint; }
Vec2 PlaneCurve::position(double t) const { return d_->eval_pos(t); }
Vec2 PlaneCurve::d1(double t) const { return d_->eval_d1(t); }
Vec2 PlaneCurve::d2(double t) const { return d_->eval_d2(t); }
double PlaneCurve::diameter() const { return d_->diam; }

const PolygonPath& PlaneCurve::path() const {
  if (d_->kind != Kind::Polygon) throw CurveSpecError("path(): not a polygon curve");
  return d_->path;
}

const CurveSpec* PlaneCurve::spec() const { return d_->spec.get(); }

bool PlaneCurve::is_unit_speed(double tol) const {
  for (int i = 0; i <= 17; ++i) {
    const double t = t0() + span() * i / 17.0;
    if (std::abs(d1(t).norm() - 1.0) > tol) return false;
  }
  return true;
}

PlaneCurve PlaneCurve::with_basepoint(double delta) const {
  if (d_->kind != Kind::Analytic || !d_->closed)
    throw CurveSpecError("with_basepoint: requires a closed analytic curve");
  const auto p = d_->pos;
  const auto f1 = d_->d1f;
  const auto f2 = d_->d2f;
  return analytic(d_->name + "@" + std::to_string(delta),
                  [p, delta](double t) { return p(t + delta); },
                  [f1, delta](double t) { return f1(t + delta); },
                  [f2, delta](double t) { return f2(t + delta); }, d_->t0,
                  d_->t1, true, d_->hint);
}

PlaneCurve PlaneCurve::scaled(double c) const {
  if (!(c > 0)) throw CurveSpecError("scaled: factor must be positive");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", c);
  const std::string nm = std::string(buf) + "*" + d_->name;
  switch (d_->kind) {
    case Kind::Analytic: {
      const auto p = d_->pos;
      const auto f1 = d_->d1f;
      const auto f2 = d_->d2f;
      return analytic(nm, [p, c](double t) { return Vec2(c * p(t)); },
                      [f1, c](double t) { return Vec2(c * f1(t)); },
                      [f2, c](double t) { return Vec2(c * f2(t)); }, d_->t0,
                      d_->t1, d_->closed, d_->hint);
    }
    case Kind::Polygon: {
      PolygonPath p = d_->path;
      for (auto& v : p.vertices) v *= c;
      return polygon(nm, std::move(p));
    }
    case Kind::Sampled: {
      auto sp = d_->sp;
      auto s1 = d_->sd1;
      auto s2 = d_->sd2;
      for (auto& v : sp) v *= c;
      for (auto& v : s1) v *= c;
      for (auto& v : s2) v *= c;
      return sampled_with_derivatives(nm, std::move(sp), std::move(s1),
                                      std::move(s2), d_->t0, d_->t1, d_->closed);
    }
  }
  throw CurveSpecError("scaled: unknown kind");
}

// ---------------------------------------------------------------------------
// named curves

namespace {

double get_param(const CurveSpec& s, const std::string& key) {
  auto it = s.params.find(key);
  if (it == s.params.end())
    throw CurveSpecError("curve '" + s.kind + "': missing parameter " + key);
  return it->second;
}

double get_param_or(const CurveSpec& s, const std::string& key, double dflt) {
  auto it = s.params.find(key);
  return it == s.params.end() ? dflt : it->second;
}

std::vector<double> get_array_or(const CurveSpec& s, const std::string& key) {
  auto it = s.arrays.find(key);
  return it == s.arrays.end() ? std::vector<double>{} : it->second;
}

PlaneCurve build_circle(const CurveSpec& s) {
  const double r = get_param(s, "r");
  if (!(r > 0)) throw CurveSpecError("circle: radius must be positive");
  return PlaneCurve::analytic(
      s.shorthand(),
      [r](double t) { return Vec2(r * std::cos(t / r), r * std::sin(t / r)); },
      [r](double t) { return Vec2(-std::sin(t / r), std::cos(t / r)); },
      [r](double t) { return Vec2(-std::cos(t / r) / r, -std::sin(t / r) / r); },
      0, 2 * kPi * r, true);
}

PlaneCurve build_ellipse(const CurveSpec& s) {
  const double a = get_param(s, "a"), b = get_param(s, "b");
  if (!(a > 0) || !(b > 0)) throw CurveSpecError("ellipse: semi-axes must be positive");
  return PlaneCurve::analytic(
      s.shorthand(),
      [a, b](double t) { return Vec2(a * std::cos(t), b * std::sin(t)); },
      [a, b](double t) { return Vec2(-a * std::sin(t), b * std::cos(t)); },
      [a, b](double t) { return Vec2(-a * std::cos(t), -b * std::sin(t)); },
      0, 2 * kPi, true);
}

PlaneCurve build_rect(const CurveSpec& s) {
  const double a = get_param(s, "a"), b = get_param(s, "b");
  if (!(a > 0) || !(b > 0)) throw CurveSpecError("rect: sides must be positive");
  PolygonPath p;
  p.vertices = {Vec2(0, 0), Vec2(a, 0), Vec2(a, b), Vec2(0, b)};
  p.closed = true;
  return PlaneCurve::polygon(s.shorthand(), std::move(p));
}

PlaneCurve build_segment(const CurveSpec& s) {
  const double len = get_param(s, "len");
  const double ang = get_param_or(s, "angle", 0.0);
  if (!(len > 0)) throw CurveSpecError("segment: length must be positive");
  const Vec2 dir(std::cos(ang), std::sin(ang));
  return PlaneCurve::analytic(
      s.shorthand(), [dir](double t) { return Vec2(t * dir); },
      [dir](double) { return dir; }, [](double) { return Vec2(0, 0); }, 0, len,
      false);
}

// Front track of the two-cusp wave front (2 cos t, sin 2t sin^2 t):
//   Gamma(t) = gamma(t) + f(t) (-1, sin 3t),  f = sqrt(2/(3 - cos 6t)).
// The y-component of gamma simplifies to (2 sin 2t - sin 4t)/4.
PlaneCurve build_fish(const CurveSpec& s) {
  auto f = [](double t) { return std::sqrt(2.0 / (3.0 - std::cos(6 * t))); };
  auto fp = [](double t) {
    const double u = 3.0 - std::cos(6 * t);
    return -3.0 * std::sqrt(2.0) * std::sin(6 * t) / (u * std::sqrt(u));
  };
  auto fpp = [](double t) {
    const double u = 3.0 - std::cos(6 * t);
    const double s6 = std::sin(6 * t), c6 = std::cos(6 * t);
    return -18.0 * std::sqrt(2.0) * c6 / (u * std::sqrt(u)) +
           27.0 * std::sqrt(2.0) * s6 * s6 / (u * u * std::sqrt(u));
  };
  return PlaneCurve::analytic(
      s.shorthand(),
      [f](double t) {
        return Vec2(2 * std::cos(t) - f(t),
                    (2 * std::sin(2 * t) - std::sin(4 * t)) / 4 + f(t) * std::sin(3 * t));
      },
      [f, fp](double t) {
        return Vec2(-2 * std::sin(t) - fp(t),
                    std::cos(2 * t) - std::cos(4 * t) + fp(t) * std::sin(3 * t) +
                        3 * f(t) * std::cos(3 * t));
      },
      [f, fp, fpp](double t) {
        return Vec2(-2 * std::cos(t) - fpp(t),
                    -2 * std::sin(2 * t) + 4 * std::sin(4 * t) +
                        fpp(t) * std::sin(3 * t) + 6 * fp(t) * std::cos(3 * t) -
                        9 * f(t) * std::sin(3 * t));
      },
      0, 2 * kPi, true);
}

PlaneCurve build_fourier(const CurveSpec& s) {
  const auto ax = get_array_or(s, "ax"), bx = get_array_or(s, "bx");
  const auto ay = get_array_or(s, "ay"), by = get_array_or(s, "by");
  const size_t n = std::max(std::max(ax.size(), bx.size()),
                            std::max(ay.size(), by.size()));
  if (n == 0) throw CurveSpecError("fourier: no coefficients");
  auto coef = [](const std::vector<double>& v, size_t k) {
    return k < v.size() ? v[k] : 0.0;
  };
  auto eval = [=](double t, int order) {
    Vec2 p(0, 0);
    for (size_t k = 0; k < n; ++k) {
      const double kk = static_cast<double>(k);
      double ck = std::cos(kk * t), sk = std::sin(kk * t);
      double fc, fs;  // d^order/dt^order of cos(kt), sin(kt)
      switch (order) {
        case 0: fc = ck; fs = sk; break;
        case 1: fc = -kk * sk; fs = kk * ck; break;
        default: fc = -kk * kk * ck; fs = -kk * kk * sk; break;
      }
      p.x() += coef(ax, k) * fc + coef(bx, k) * fs;
      p.y() += coef(ay, k) * fc + coef(by, k) * fs;
    }
    return p;
  };
  return PlaneCurve::analytic(
      s.shorthand(), [eval](double t) { return eval(t, 0); },
      [eval](double t) { return eval(t, 1); },
      [eval](double t) { return eval(t, 2); }, 0, 2 * kPi, true);
}

PlaneCurve build_eight(const CurveSpec& s) {
  CurveSpec f;
  f.kind = "fourier";
  f.arrays["bx"] = {0, 0, 1};  // x = sin 2t
  f.arrays["by"] = {0, 1};     // y = sin t
  PlaneCurve c = make_named_curve(f);
  return PlaneCurve::analytic(
      s.shorthand(), [c](double t) { return c.position(t); },
      [c](double t) { return c.d1(t); }, [c](double t) { return c.d2(t); }, 0,
      2 * kPi, true);
}

// Strictly convex curve from a support function
//   h(phi) = r0 + sum_{k>=2} a_k cos(k phi) + b_k sin(k phi),
// position = h (cos, sin) + h' (-sin, cos); curvature 1/(h + h'').
PlaneCurve build_convex(const CurveSpec& s) {
  const double r0 = get_param(s, "r0");
  const auto a = get_array_or(s, "a"), b = get_array_or(s, "b");
  const size_t n = std::max(a.size(), b.size());
  auto coef = [](const std::vector<double>& v, size_t i) {
    return i < v.size() ? v[i] : 0.0;
  };
  auto hder = [=](double phi, int order) {
    double v = order == 0 ? r0 : 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double k = static_cast<double>(i + 2);
      const double ak = coef(a, i), bk = coef(b, i);
      const double c = std::cos(k * phi), sn = std::sin(k * phi);
      switch (order) {
        case 0: v += ak * c + bk * sn; break;
        case 1: v += k * (-ak * sn + bk * c); break;
        case 2: v += k * k * (-ak * c - bk * sn); break;
        default: v += k * k * k * (ak * sn - bk * c); break;
      }
    }
    return v;
  };
  // curvature radius h + h'' must stay positive
  double rmin = 1e300;
  for (int i = 0; i < 4096; ++i) {
    const double phi = 2 * kPi * i / 4096;
    rmin = std::min(rmin, hder(phi, 0) + hder(phi, 2));
  }
  if (!(rmin > 0))
    throw CurveSpecError("convex: support function is not strictly convex");
  auto posf = [hder](double phi) {
    const double h = hder(phi, 0), h1 = hder(phi, 1);
    const double c = std::cos(phi), sn = std::sin(phi);
    return Vec2(h * c - h1 * sn, h * sn + h1 * c);
  };
  auto d1f = [hder](double phi) {
    const double r = hder(phi, 0) + hder(phi, 2);
    return Vec2(-r * std::sin(phi), r * std::cos(phi));
  };
  auto d2f = [hder](double phi) {
    const double r = hder(phi, 0) + hder(phi, 2);
    const double rp = hder(phi, 1) + hder(phi, 3);
    const double c = std::cos(phi), sn = std::sin(phi);
    return Vec2(-rp * sn - r * c, rp * c - r * sn);
  };
  return PlaneCurve::analytic(s.shorthand(), posf, d1f, d2f, 0, 2 * kPi, true);
}

}  // namespace

std::string CurveSpec::shorthand() const {
  auto p = [&](const std::string& k) { return params.at(k); };
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  if (kind == "circle") return "circle:" + num(p("r"));
  if (kind == "ellipse") return "ellipse:" + num(p("a")) + "," + num(p("b"));
  if (kind == "rect") return "rect:" + num(p("a")) + "," + num(p("b"));
  if (kind == "segment") {
    std::string out = "segment:" + num(p("len"));
    auto it = params.find("angle");
    if (it != params.end() && it->second != 0.0) out += "," + num(it->second);
    return out;
  }
  if (kind == "fish" || kind == "eight") return kind;
  if (kind == "fourier") {
    std::vector<double> flat;
    const auto get = [&](const char* k) {
      auto it = arrays.find(k);
      return it == arrays.end() ? std::vector<double>{} : it->second;
    };
    const auto ax = get("ax"), bx = get("bx"), ay = get("ay"), by = get("by");
    size_t n = std::max(std::max(ax.size(), bx.size()), std::max(ay.size(), by.size()));
    auto coef = [](const std::vector<double>& v, size_t i) { return i < v.size() ? v[i] : 0.0; };
    for (size_t k = 0; k < n; ++k) {
      flat.push_back(coef(ax, k));
      flat.push_back(coef(bx, k));
      flat.push_back(coef(ay, k));
      flat.push_back(coef(by, k));
    }
    return "fourier:" + fmt_params(flat);
  }
  if (kind == "convex") {
    std::vector<double> flat{p("r0")};
    const auto a = arrays.count("a") ? arrays.at("a") : std::vector<double>{};
    const auto b = arrays.count("b") ? arrays.at("b") : std::vector<double>{};
    const size_t n = std::max(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
      flat.push_back(i < a.size() ? a[i] : 0.0);
      flat.push_back(i < b.size() ? b[i] : 0.0);
    }
    return "convex:" + fmt_params(flat);
  }
  return kind;
}

PlaneCurve make_named_curve(const CurveSpec& spec) {
  PlaneCurve c = [&] {
    if (spec.kind == "circle") return build_circle(spec);
    if (spec.kind == "ellipse") return build_ellipse(spec);
    if (spec.kind == "rect" || spec.kind == "rectangle") return build_rect(spec);
    if (spec.kind == "segment") return build_segment(spec);
    if (spec.kind == "fish" || spec.kind == "fish-front") return build_fish(spec);
    if (spec.kind == "eight") return build_eight(spec);
    if (spec.kind == "fourier") return build_fourier(spec);
    if (spec.kind == "convex") return build_convex(spec);
    throw CurveSpecError("unknown curve kind '" + spec.kind + "'");
  }();
  auto d = std::make_shared<PlaneCurve::Data>(*c.d_);
  d->spec = std::make_shared<CurveSpec>(spec);
  return PlaneCurve(std::move(d));
}

// ---------------------------------------------------------------------------
// differential invariants

double curvature(const PlaneCurve& c, double t) {
  if (c.kind() == PlaneCurve::Kind::Polygon)
    throw CurveSpecError("curvature: undefined for polygon curves");
  const Vec2 v = c.d1(t), a = c.d2(t);
  const double n = v.norm();
  if (n <= 1e-12 * std::max(1.0, c.diameter()))
    throw ImmersionError("curvature: vanishing derivative at t = " + std::to_string(t));
  return (v.x() * a.y() - v.y() * a.x()) / (n * n * n);
}

double max_abs_curvature(const PlaneCurve& c, int n) {
  if (n <= 0) n = c.samples_hint();
  double m = 0;
  for (int i = 0; i < n; ++i)
    m = std::max(m, std::abs(curvature(c, c.t0() + c.span() * i / n)));
  return m;
}

namespace {

template <typename F>
double gl_integrate(F&& f, double a, double b, int intervals) {
  double acc = 0;
  const double h = (b - a) / intervals;
  for (int i = 0; i < intervals; ++i) {
    const double mid = a + (i + 0.5) * h;
    double cell = 0;
    for (int j = 0; j < 7; ++j) cell += kGlW[j] * f(mid + 0.5 * h * kGlX[j]);
    acc += cell * 0.5 * h;
  }
  return acc;
}

int quad_intervals(const PlaneCurve& c) {
  return std::max(1024, c.samples_hint());
}

}  // namespace

double curve_length(const PlaneCurve& c) {
  if (c.kind() == PlaneCurve::Kind::Polygon) {
    const auto& v = c.path().vertices;
    const size_t ne = c.path().closed ? v.size() : v.size() - 1;
    double len = 0;
    for (size_t i = 0; i < ne; ++i) len += (v[(i + 1) % v.size()] - v[i]).norm();
    return len;
  }
  return gl_integrate([&](double t) { return c.d1(t).norm(); }, c.t0(), c.t1(),
                      quad_intervals(c));
}

double signed_area(const PlaneCurve& c) {
  if (!c.closed()) throw CurveSpecError("signed_area: curve must be closed");
  if (c.kind() == PlaneCurve::Kind::Polygon) {
    const auto& v = c.path().vertices;
    double acc = 0;
    for (size_t i = 0; i < v.size(); ++i) {
      const Vec2 &a = v[i], &b = v[(i + 1) % v.size()];
      acc += a.x() * b.y() - a.y() * b.x();
    }
    return acc / 2;
  }
  return gl_integrate(
      [&](double t) {
        const Vec2 p = c.position(t), v = c.d1(t);
        return p.x() * v.y() - p.y() * v.x();
      },
      c.t0(), c.t1(), quad_intervals(c)) / 2;
}

PlaneCurve arclength_reparam(const PlaneCurve& c, int n) {
  if (n < 16) throw CurveSpecError("arclength_reparam: need n >= 16");

  if (c.kind() == PlaneCurve::Kind::Polygon) {
    const double total = curve_length(c);
    std::vector<Vec2> p(n + 1), d1(n + 1), d2(n + 1, Vec2::Zero());
    for (int k = 0; k <= n; ++k) {
      const double s = total * k / n;
      p[k] = c.position(s);
      d1[k] = c.d1(s);
    }
    if (c.closed()) {
      p[n] = p[0];
      d1[n] = d1[0];
    }
    return PlaneCurve::sampled_with_derivatives(c.name() + "/arclen", std::move(p),
                                                std::move(d1), std::move(d2), 0,
                                                total, c.closed());
  }

  const double floor = 1e-12 * std::max(1.0, c.diameter());
  auto speed = [&](double t) {
    const double v = c.d1(t).norm();
    if (v <= floor)
      throw ImmersionError("arclength_reparam: vanishing derivative at t = " +
                           std::to_string(t));
    return v;
  };

  // cumulative arclength over a fine grid
  const int m = std::max(4 * n, 4096);
  const double h = c.span() / m;
  std::vector<double> cum(m + 1, 0.0);
  for (int i = 0; i < m; ++i)
    cum[i + 1] = cum[i] + gl_integrate(speed, c.t0() + i * h, c.t0() + (i + 1) * h, 1);
  const double total = cum[m];

  std::vector<Vec2> p(n + 1), d1(n + 1), d2(n + 1);
  double t = c.t0();
  for (int k = 0; k <= n; ++k) {
    const double target = total * k / n;
    if (k == 0) {
      t = c.t0();
    } else if (k == n) {
      t = c.t1();
    } else {
      const auto it = std::upper_bound(cum.begin(), cum.end(), target);
      const int j = std::max(0, static_cast<int>(it - cum.begin()) - 1);
      t = c.t0() + j * h;
      double have = cum[j];
      // Newton on s(t) = target; the integrand is smooth and positive
      for (int iter = 0; iter < 60; ++iter) {
        const double f = have + gl_integrate(speed, c.t0() + j * h, t, 1) - target;
        const double step = f / speed(t);
        t -= step;
        t = std::clamp(t, c.t0() + j * h - h, c.t0() + (j + 2) * h);
        if (std::abs(step) < 1e-15 * c.span()) break;
      }
    }
    const Vec2 v = c.d1(t), a = c.d2(t);
    const double sp = speed(t);
    p[k] = c.position(t);
    d1[k] = v / sp;
    d2[k] = a / (sp * sp) - v * (v.dot(a)) / (sp * sp * sp * sp);
  }
  if (c.closed()) {
    p[n] = p[0];
    d1[n] = d1[0];
    d2[n] = d2[0];
  }
  return PlaneCurve::sampled_with_derivatives(c.name() + "/arclen", std::move(p),
                                              std::move(d1), std::move(d2), 0,
                                              total, c.closed());
}

int turning_number(const PlaneCurve& c, double* residual) {
  if (!c.closed()) throw CurveSpecError("turning_number: curve must be closed");

  if (c.kind() == PlaneCurve::Kind::Polygon) {
    const auto& v = c.path().vertices;
    const size_t nv = v.size();
    double total = 0;
    for (size_t i = 0; i < nv; ++i) {
      const Vec2 e0 = (v[(i + 1) % nv] - v[i]).normalized();
      const Vec2 e1 = (v[(i + 2) % nv] - v[(i + 1) % nv]).normalized();
      const double turn =
          std::atan2(e0.x() * e1.y() - e0.y() * e1.x(), e0.dot(e1));
      if (std::abs(turn) > kPi - 1e-9)
        throw CurveSpecError("turning_number: anti-parallel polygon edges");
      total += turn;
    }
    const double turns = total / (2 * kPi);
    if (residual) *residual = std::abs(turns - std::round(turns));
    return static_cast<int>(std::lround(turns));
  }

  for (int n = std::max(64, c.samples_hint()); n <= (1 << 20); n *= 2) {
    double prev = 0, total = 0;
    bool ok = true;
    for (int i = 0; i <= n; ++i) {
      const Vec2 v = c.d1(c.t0() + c.span() * i / n);
      const double ang = std::atan2(v.y(), v.x());
      if (i > 0) {
        const double step = wrap_angle_diff(ang - prev);
        if (std::abs(step) >= kPi / 2) {
          ok = false;
          break;
        }
        total += step;
      }
      prev = ang;
    }
    if (!ok) continue;
    const double turns = total / (2 * kPi);
    const double res = std::abs(turns - std::round(turns));
    if (res >= 0.1)
      throw SamplingError("turning_number: residual " + std::to_string(res) +
                          " after unwrapping; curve may not be closed smoothly");
    if (residual) *residual = res;
    return static_cast<int>(std::lround(turns));
  }
  throw SamplingError("turning_number: angle steps exceed pi/2 at 2^20 samples");
}

GlobalInvariants global_invariants(const PlaneCurve& c) {
  if (!c.closed()) throw CurveSpecError("global_invariants: curve must be closed");
  GlobalInvariants g;
  g.length = curve_length(c);
  g.area = signed_area(c);
  g.rotation_number = turning_number(c, &g.rotation_residual);

  if (c.kind() == PlaneCurve::Kind::Polygon) {
    const auto& v = c.path().vertices;
    const size_t nv = v.size();
    double min_turn = 1e300;
    for (size_t i = 0; i < nv; ++i) {
      const Vec2 e0 = (v[(i + 1) % nv] - v[i]).normalized();
      const Vec2 e1 = (v[(i + 2) % nv] - v[(i + 1) % nv]).normalized();
      min_turn = std::min(min_turn,
                          std::atan2(e0.x() * e1.y() - e0.y() * e1.x(), e0.dot(e1)));
    }
    g.max_abs_kappa = std::numeric_limits<double>::infinity();
    g.min_kappa = min_turn < -1e-12 ? -1.0 : 0.0;
    g.convex = min_turn >= -1e-12 && g.rotation_number == 1;
    return g;
  }

  const int n = c.samples_hint();
  double kmin = 1e300, kabs = 0;
  for (int i = 0; i < n; ++i) {
    const double k = curvature(c, c.t0() + c.span() * i / n);
    kmin = std::min(kmin, k);
    kabs = std::max(kabs, std::abs(k));
  }
  g.max_abs_kappa = kabs;
  g.min_kappa = kmin;
  g.convex = kmin >= -1e-9 * kabs && g.rotation_number == 1;
  return g;
}

}  // namespace bikemono
