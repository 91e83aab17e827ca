#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bikemono/curve.hpp"
#include "bikemono/rng.hpp"
#include "support/quadrature.hpp"

using namespace bikemono;

namespace {

constexpr double kPi = std::numbers::pi;

PlaneCurve named(const std::string& kind, std::map<std::string, double> params = {},
                 std::map<std::string, std::vector<double>> arrays = {}) {
  CurveSpec s;
  s.kind = kind;
  s.params = std::move(params);
  s.arrays = std::move(arrays);
  return make_named_curve(s);
}

double oracle_length(const PlaneCurve& c) {
  return testsupport::adaptive_simpson(
      [&](double t) { return c.d1(t).norm(); }, c.t0(), c.t1(), 1e-13);
}

}  // namespace

TEST_CASE("named curve builders") {
  const PlaneCurve circ = named("circle", {{"r", 1.0}});
  CHECK(circ.closed());
  CHECK(oracle_length(circ) == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(circ.is_unit_speed());

  const PlaneCurve ell = named("ellipse", {{"a", 2.0}, {"b", 1.0}});
  CHECK(signed_area(ell) == doctest::Approx(2 * kPi).epsilon(1e-10));
  CHECK(ell.name() == "ellipse:2,1");

  // the fish front at t = 0: gamma(0) = (2,0) and the frame term is (-1,0)
  const PlaneCurve fish = named("fish");
  CHECK(fish.position(0).x() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fish.position(0).y() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(fish.closed());

  CHECK_THROWS_AS(named("nosuchcurve"), CurveSpecError);
  CHECK_THROWS_AS(named("ellipse", {{"a", -1.0}, {"b", 1.0}}), CurveSpecError);
  CHECK_THROWS_AS(named("circle", {{"r", 0.0}}), CurveSpecError);
}

TEST_CASE("derivatives of named curves match finite differences") {
  Rng rng(42);
  for (const char* kind : {"circle", "ellipse", "fish", "eight", "convex"}) {
    PlaneCurve c = [&] {
      if (std::string(kind) == "circle") return named("circle", {{"r", 1.7}});
      if (std::string(kind) == "ellipse") return named("ellipse", {{"a", 2}, {"b", 1}});
      if (std::string(kind) == "convex")
        return named("convex", {{"r0", 1.3}}, {{"a", {0.1, 0.04}}, {"b", {-0.05, 0.02}}});
      return named(kind);
    }();
    const double h = 1e-5;
    for (int i = 0; i < 24; ++i) {
      const double t = rng.uniform(c.t0() + 0.01, c.t1() - 0.01);
      const Vec2 fd1 = (c.position(t + h) - c.position(t - h)) / (2 * h);
      const Vec2 fd2 = (c.d1(t + h) - c.d1(t - h)) / (2 * h);
      CHECK((c.d1(t) - fd1).norm() < 1e-6 * (1 + c.d1(t).norm()));
      CHECK((c.d2(t) - fd2).norm() < 1e-6 * (1 + c.d2(t).norm()));
    }
  }
}

TEST_CASE("curvature") {
  const PlaneCurve c2 = named("circle", {{"r", 2.0}});
  for (double t : {0.0, 1.0, 2.5, 11.0})
    CHECK(curvature(c2, t) == doctest::Approx(0.5).epsilon(1e-12));

  // ellipse max curvature a/b^2 at (a, 0)
  const PlaneCurve ell = named("ellipse", {{"a", 2.0}, {"b", 1.0}});
  CHECK(curvature(ell, 0.0) == doctest::Approx(2.0).epsilon(1e-12));

  const PlaneCurve seg = named("segment", {{"len", 3.0}});
  CHECK(curvature(seg, 1.0) == 0.0);

  // vanishing derivative is an immersion violation
  const PlaneCurve cusp = PlaneCurve::analytic(
      "cusp", [](double t) { return Vec2(t * t * t, 0); },
      [](double t) { return Vec2(3 * t * t, 0); },
      [](double t) { return Vec2(6 * t, 0); }, -1, 1, false);
  CHECK_THROWS_AS(curvature(cusp, 0.0), ImmersionError);
}

TEST_CASE("curvature scaling law") {
  const PlaneCurve ell = named("ellipse", {{"a", 2.0}, {"b", 1.0}});
  const double c = 2.5;
  const PlaneCurve big = ell.scaled(c);
  for (int i = 0; i < 64; ++i) {
    const double t = 2 * kPi * i / 64;
    CHECK(std::abs(curvature(big, t) - curvature(ell, t) / c) < 1e-10);
  }
}

TEST_CASE("arclength reparametrization") {
  const PlaneCurve circ = named("circle", {{"r", 1.0}});
  const PlaneCurve cu = arclength_reparam(circ, 1000);
  CHECK(std::abs(cu.span() - 2 * kPi) < 1e-8);

  const PlaneCurve ell = named("ellipse", {{"a", 2.0}, {"b", 1.0}});
  const double oracle = oracle_length(ell);
  CHECK(oracle == doctest::Approx(9.6884482205).epsilon(1e-8));
  const PlaneCurve eu = arclength_reparam(ell, 2000);
  CHECK(std::abs(eu.span() - oracle) < 1e-8 * oracle);
  // unit speed at all samples
  for (int k = 0; k <= 2000; ++k)
    CHECK(std::abs(eu.d1(eu.span() * k / 2000).norm() - 1.0) < 1e-8);

  const PlaneCurve seg = named("segment", {{"len", 3.0}});
  const PlaneCurve su = arclength_reparam(seg, 64);
  CHECK(su.t0() == 0.0);
  CHECK(std::abs(su.t1() - 3.0) < 1e-12);

  CHECK_THROWS_AS(arclength_reparam(circ, 8), CurveSpecError);
}

TEST_CASE("reparametrization invariance of invariants") {
  const PlaneCurve ell = named("ellipse", {{"a", 2.0}, {"b", 1.0}});
  const PlaneCurve eu = arclength_reparam(ell, 4096);
  const GlobalInvariants a = global_invariants(ell);
  const GlobalInvariants b = global_invariants(eu);
  CHECK(std::abs(a.length - b.length) < 1e-6);
  CHECK(std::abs(a.area - b.area) < 1e-6);
  CHECK(a.rotation_number == b.rotation_number);
  CHECK(a.convex == b.convex);
  CHECK(std::abs(a.max_abs_kappa - b.max_abs_kappa) < 1e-6 * a.max_abs_kappa);
}

TEST_CASE("global invariants") {
  const GlobalInvariants circ = global_invariants(named("circle", {{"r", 1.0}}));
  CHECK(circ.length == doctest::Approx(2 * kPi).epsilon(1e-10));
  CHECK(circ.area == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(circ.rotation_number == 1);
  CHECK(circ.convex);

  const GlobalInvariants fish = global_invariants(named("fish"));
  CHECK(fish.rotation_number == 1);
  CHECK_FALSE(fish.convex);

  const GlobalInvariants eight = global_invariants(named("eight"));
  CHECK(eight.rotation_number == 0);
  CHECK_FALSE(eight.convex);
}

TEST_CASE("every ellipse builder output is convex") {
  for (double a : {0.3, 1.0, 2.0, 3.5})
    for (double b : {0.4, 1.0, 2.5}) {
      const GlobalInvariants g = global_invariants(named("ellipse", {{"a", a}, {"b", b}}));
      CHECK(g.convex);
    }
}

TEST_CASE("polygon curves") {
  const PlaneCurve rect = named("rect", {{"a", 2.0}, {"b", 3.0}});
  CHECK(curve_length(rect) == doctest::Approx(10.0));
  CHECK(signed_area(rect) == doctest::Approx(6.0));
  const GlobalInvariants g = global_invariants(rect);
  CHECK(g.rotation_number == 1);
  CHECK(g.convex);
  CHECK(rect.position(0.0) == Vec2(0, 0));
  CHECK(rect.position(2.0) == Vec2(2, 0));
  CHECK(rect.position(3.5) == Vec2(2, 1.5));
  CHECK(rect.d1(1.0) == Vec2(1, 0));
  CHECK(rect.d1(4.0) == Vec2(0, 1));

  PolygonPath bad;
  bad.vertices = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 0), Vec2(0, 1)};
  CHECK_THROWS_AS(PlaneCurve::polygon("bad", bad), CurveSpecError);
}

TEST_CASE("support-function curves are strictly convex") {
  const PlaneCurve c =
      named("convex", {{"r0", 1.0}}, {{"a", {0.12, -0.03}}, {"b", {0.05, 0.04}}});
  const GlobalInvariants g = global_invariants(c);
  CHECK(g.convex);
  CHECK(g.min_kappa > 0);
  CHECK(g.rotation_number == 1);

  CHECK_THROWS_AS(
      named("convex", {{"r0", 0.1}}, {{"a", {0.5}}, {"b", {0.0}}}),
      CurveSpecError);
}

TEST_CASE("sampled curves from bare positions use cubic-accurate differences") {
  const PlaneCurve ell = named("ellipse", {{"a", 2.0}, {"b", 1.0}});
  const int n = 2048;
  std::vector<Vec2> p(n + 1);
  for (int k = 0; k <= n; ++k) p[k] = ell.position(2 * kPi * k / n);
  const PlaneCurve s = PlaneCurve::sampled("ellipse-sampled", p, 0, 2 * kPi, true);
  for (int k = 0; k < 16; ++k) {
    const double t = 2 * kPi * k / 16;
    CHECK((s.d1(t) - ell.d1(t)).norm() < 1e-8);
    CHECK((s.d2(t) - ell.d2(t)).norm() < 1e-5);
    CHECK(std::abs(curvature(s, t) - curvature(ell, t)) < 1e-5);
  }
}

TEST_CASE("basepoint shift") {
  const PlaneCurve fish = named("fish");
  const PlaneCurve sh = fish.with_basepoint(1.25);
  CHECK((sh.position(0.0) - fish.position(1.25)).norm() == 0.0);
  CHECK((sh.position(2.0) - fish.position(3.25)).norm() == 0.0);
  CHECK(sh.closed());
}
