#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "bikemono/errors.hpp"

namespace bikemono {

template <typename S>
using Mat2T = Eigen::Matrix<S, 2, 2>;
template <typename S>
using Vec2T = Eigen::Matrix<S, 2, 1>;

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

/// Element of SL2(R), kept at unit determinant by renormalizing on
/// construction and after products.
template <typename S>
struct Sl2 {
  Mat2T<S> m;

  Sl2() : m(Mat2T<S>::Identity()) {}

  explicit Sl2(const Mat2T<S>& a) : m(a) { renormalize(); }

  Sl2(S m11, S m12, S m21, S m22) {
    m << m11, m12, m21, m22;
    renormalize();
  }

  static Sl2 identity() { return Sl2(); }

  S trace() const { return m(0, 0) + m(1, 1); }

  // Extended precision: the naive product difference loses ~|m|^2 eps to
  // cancellation, which matters for strongly hyperbolic transports.
  S det() const {
    const long double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    return static_cast<S>(a * d - b * c);
  }

  /// Inverse of a unit-determinant matrix: adjugate.
  Sl2 inverse() const {
    Sl2 r;
    r.m << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return r;
  }

  Sl2 operator*(const Sl2& rhs) const { return Sl2(Mat2T<S>(m * rhs.m)); }

  Vec2T<S> operator*(const Vec2T<S>& v) const { return m * v; }

  /// n-th power by binary squaring, renormalized at every multiply.
  Sl2 pow(long n) const {
    Sl2 base = *this;
    if (n < 0) {
      base = inverse();
      n = -n;
    }
    Sl2 acc;
    while (n > 0) {
      if (n & 1) acc = acc * base;
      base = base * base;
      n >>= 1;
    }
    return acc;
  }

  void renormalize() {
    // Beyond |entries| ~ 1e5 a unit determinant is no longer representable
    // (the product difference cancels below rounding); the algebra keeps
    // products of unit-determinant factors unit, so leave them be.
    if (m.template lpNorm<Eigen::Infinity>() > S(1e5)) return;
    const S d = det();
    if (!(d > S(0)))
      throw NumericError("Sl2: determinant must be positive, got " +
                         std::to_string(static_cast<double>(d)));
    // Rescaling a matrix that is already unit to representational accuracy
    // only injects rounding into the entries (the trace of a large product
    // is more accurate than its determinant), so leave those alone.
    if (std::abs(d - S(1)) <= S(1e-11)) return;
    m /= std::sqrt(d);
  }
};

using Sl2d = Sl2<double>;

enum class Sl2Class { Identity, Elliptic, Parabolic, Hyperbolic };

inline const char* to_string(Sl2Class c) {
  switch (c) {
    case Sl2Class::Identity: return "identity";
    case Sl2Class::Elliptic: return "elliptic";
    case Sl2Class::Parabolic: return "parabolic";
    case Sl2Class::Hyperbolic: return "hyperbolic";
  }
  return "?";
}

/// Conjugacy class of an SL2 element together with the margin |tr| - 2 that
/// the decision was based on.
struct Classification {
  Sl2Class type;
  double margin;  // |tr| - 2, signed (negative inside the elliptic range)
  double tol;
};

/// Trichotomy on |trace|: hyperbolic > 2, elliptic < 2, parabolic at 2.
/// +-I within tol is reported as Identity.
template <typename S>
Classification classify(const Sl2<S>& g, double tol) {
  if (!(tol > 0)) throw NumericError("classify: tol must be positive");
  const double tr = static_cast<double>(g.trace());
  const double margin = std::abs(tr) - 2.0;
  const double sign = tr < 0 ? -1.0 : 1.0;
  const double off_identity =
      (g.m - sign * Mat2T<S>::Identity()).template lpNorm<Eigen::Infinity>();
  if (off_identity <= tol) return {Sl2Class::Identity, margin, tol};
  if (margin > tol) return {Sl2Class::Hyperbolic, margin, tol};
  if (margin < -tol) return {Sl2Class::Elliptic, margin, tol};
  return {Sl2Class::Parabolic, margin, tol};
}

/// exp of a traceless 2x2 matrix, in closed form. With delta^2 = -det A:
/// cosh(delta) I + sinh(delta)/delta A, which degenerates to the cos/sinc
/// form for delta^2 < 0 and to I + A at delta = 0.
template <typename S>
Sl2<S> exp_traceless(const Mat2T<S>& a) {
  const S d2 = -(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0));
  S c, s;  // exp(A) = c I + s A
  if (d2 > S(1e-12)) {
    const S d = std::sqrt(d2);
    c = std::cosh(d);
    s = std::sinh(d) / d;
  } else if (d2 < S(-1e-12)) {
    const S d = std::sqrt(-d2);
    c = std::cos(d);
    s = std::sin(d) / d;
  } else {
    // series in d2 around 0; enough terms for |d2| <= 1e-12
    c = S(1) + d2 / S(2) + d2 * d2 / S(24);
    s = S(1) + d2 / S(6) + d2 * d2 / S(120);
  }
  Sl2<S> r;
  r.m = c * Mat2T<S>::Identity() + s * a;
  return r;
}

/// Squared-direction (Hopf) angle of a nonzero vector: arg((y1 + i y2)^2),
/// in (-pi, pi]. Collapses v and -v, so directions live on RP^1 ~ S^1.
template <typename S>
S hopf_angle(const Vec2T<S>& y) {
  return std::atan2(S(2) * y(0) * y(1), y(0) * y(0) - y(1) * y(1));
}

/// Action of g on the circle of frame angles theta: lift theta to the
/// half-angle vector (cos theta/2, sin theta/2), push through g, project
/// back with the Hopf square. Well defined on PSL2 (g and -g agree).
template <typename S>
S circle_action(const Sl2<S>& g, S theta) {
  const Vec2T<S> v(std::cos(theta / S(2)), std::sin(theta / S(2)));
  return hopf_angle<S>(g.m * v);
}

enum class Stability { Attracting, Repelling, Neutral };

inline const char* to_string(Stability s) {
  switch (s) {
    case Stability::Attracting: return "attracting";
    case Stability::Repelling: return "repelling";
    case Stability::Neutral: return "neutral";
  }
  return "?";
}

struct FixedDirection {
  double theta;
  Stability stability;
};

namespace detail {

// Eigenvector of a 2x2 matrix for eigenvalue lambda: the two candidate rows
// of (m - lambda I) give two expressions; take the better conditioned one.
template <typename S>
Vec2T<S> eigenvector_2x2(const Mat2T<S>& m, S lambda) {
  const Vec2T<S> v1(m(0, 1), lambda - m(0, 0));
  const Vec2T<S> v2(lambda - m(1, 1), m(1, 0));
  return v1.norm() >= v2.norm() ? v1 : v2;
}

}  // namespace detail

/// Fixed directions of the circle action. Hyperbolic: two, attracting one
/// first (larger |eigenvalue|). Parabolic: a single neutral direction.
/// Elliptic and Identity: none.
template <typename S>
std::vector<FixedDirection> fixed_directions(const Sl2<S>& g, double tol) {
  const Classification c = classify(g, tol);
  std::vector<FixedDirection> out;
  switch (c.type) {
    case Sl2Class::Identity:
    case Sl2Class::Elliptic:
      break;
    case Sl2Class::Parabolic: {
      const S lambda = g.trace() < 0 ? S(-1) : S(1);
      const Vec2T<S> v = detail::eigenvector_2x2<S>(g.m, lambda);
      out.push_back({static_cast<double>(hopf_angle<S>(v)), Stability::Neutral});
      break;
    }
    case Sl2Class::Hyperbolic: {
      const S tr = g.trace();
      const S disc = std::sqrt(tr * tr - S(4));
      const S l1 = (tr + (tr < 0 ? -disc : disc)) / S(2);  // |l1| > 1
      const S l2 = S(1) / l1;
      const Vec2T<S> va = detail::eigenvector_2x2<S>(g.m, l1);
      const Vec2T<S> vr = detail::eigenvector_2x2<S>(g.m, l2);
      out.push_back({static_cast<double>(hopf_angle<S>(va)), Stability::Attracting});
      out.push_back({static_cast<double>(hopf_angle<S>(vr)), Stability::Repelling});
      break;
    }
  }
  return out;
}

/// As fixed_directions, but refuses when the hyperbolic/parabolic decision
/// is not supported by at least `margin_floor` of trace margin.
template <typename S>
std::vector<FixedDirection> fixed_directions_checked(const Sl2<S>& g, double tol,
                                                     double margin_floor) {
  const Classification c = classify(g, tol);
  if (c.type == Sl2Class::Hyperbolic && c.margin < margin_floor) {
    throw MarginalClassification(
        c.margin, "fixed directions requested with margin " +
                      std::to_string(c.margin) + " below floor " +
                      std::to_string(margin_floor));
  }
  return fixed_directions(g, tol);
}

}  // namespace bikemono
