#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bikemono/backtrack.hpp"
#include "bikemono/corpus.hpp"
#include "bikemono/curve.hpp"
#include "bikemono/emit.hpp"
#include "bikemono/rng.hpp"

using namespace bikemono;

namespace {

constexpr double kPi = std::numbers::pi;

PlaneCurve named(const std::string& shorthand) {
  return make_named_curve(parse_curve_spec(shorthand));
}

double wrap(double a) {
  a = std::fmod(a, 2 * kPi);
  if (a > kPi) a -= 2 * kPi;
  if (a < -kPi) a += 2 * kPi;
  return a;
}

// printed rear track of the fish example
Vec2 fish_gamma(double t) {
  return Vec2(2 * std::cos(t), std::sin(2 * t) * std::sin(t) * std::sin(t));
}

}  // namespace

TEST_CASE("theta flow along a segment is the tractrix angle law") {
  const PlaneCurve seg = named("segment:3");
  ThetaFlowOptions opt;
  opt.steps = 1 << 12;
  const auto th = theta_flow(seg, 1.0, kPi / 2, opt);
  // closed form: tan(theta/2) = e^t tan(theta0/2)
  for (size_t k = 0; k < th.size(); k += 256) {
    const double t = 3.0 * k / (th.size() - 1);
    const double want = 2 * std::atan(std::exp(t) * std::tan(kPi / 4));
    CHECK(std::abs(th[k] - want) < 1e-8);
  }
  // endpoint agrees with the Moebius action of the segment transport
  const Sl2d h3 = exp_traceless<double>(
      Mat2(3.0 * connection_matrix(Vec2(1, 0), 1.0)));
  CHECK(std::abs(wrap(th.back() - circle_action(h3, kPi / 2))) < 1e-8);

  // aligned frame rides straight: theta stays at the equilibrium
  const auto th0 = theta_flow(seg, 1.0, 0.0, opt);
  for (double v : th0) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("projectivized transport solves the frame equation") {
  const PlaneCurve fish = named("fish");
  TransportOptions topt;
  topt.steps = 1 << 16;
  const TransportResult tr = transport_smooth(fish, 1.0, topt);
  Rng rng(314);
  for (int trial = 0; trial < 3; ++trial) {
    const double th0 = rng.uniform(-kPi, kPi);
    ThetaFlowOptions fo;
    fo.steps = topt.steps;
    const auto th = theta_flow(fish, 1.0, th0, fo);
    double worst = 0;
    for (size_t k = 0; k < tr.b.size(); k += 512)
      worst = std::max(worst,
                       std::abs(wrap(circle_action(tr.b[k], th0) - th[k])));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("rotating frame of a circle") {
  const PlaneCurve c2 = named("circle:2");
  const MonodromyReport rep = monodromy(c2, 1.0);
  REQUIRE(rep.cls.type == Sl2Class::Hyperbolic);
  ThetaFlowOptions opt;
  opt.steps = 1 << 13;
  const auto th = theta_flow(c2, 1.0, rep.fixed[0].theta, opt);
  // at the fixed frame angle, theta(t) - t/R is constant
  const double c0 = th[0];
  for (size_t k = 0; k < th.size(); k += 128) {
    const double t = 4 * kPi * k / (th.size() - 1);
    CHECK(std::abs(th[k] - t / 2 - c0) < 1e-6);
  }
}

TEST_CASE("closed back tracks of circle R=2") {
  const PlaneCurve c2 = named("circle:2");
  const auto tracks = closed_back_tracks(c2, 1.0);
  REQUIRE(tracks.size() == 2);
  CHECK(tracks[0].branch == Stability::Attracting);
  CHECK(tracks[1].branch == Stability::Repelling);

  const double want = std::sqrt(3.0);  // tangent-line geometry sqrt(R^2 - l^2)
  for (const auto& bt : tracks) {
    CHECK(bt.closes);
    CHECK(bt.closure_pos_gap < 1e-6 * c2.diameter());
    CHECK(bt.noskid_residual < 1e-6);
    for (size_t k = 0; k < bt.gamma.size(); k += 97)
      CHECK(std::abs(bt.gamma[k].norm() - want) < 1e-6);
    CHECK(rotation_number_rear(bt) == 1);
    CHECK(bt.cusps.empty());
    CHECK(bt.maslov == 0);
    CHECK(bt.maslov_reliable);
  }
  // both closed tracks have the same rotation number
  CHECK(tracks[0].rho == tracks[1].rho);
}

TEST_CASE("rear velocity stays parallel to the frame") {
  const PlaneCurve fish = named("fish");
  const auto tracks = closed_back_tracks(fish, 0.5);
  REQUIRE(!tracks.empty());
  const BackTrack& bt = tracks.front();
  const double h = bt.t[1] - bt.t[0];
  double worst = 0;
  for (size_t k = 1; k + 1 < bt.t.size(); ++k) {
    const Vec2 dg = (bt.gamma[k + 1] - bt.gamma[k - 1]) / (2 * h);
    const Vec2 r(std::cos(bt.theta[k]), std::sin(bt.theta[k]));
    worst = std::max(worst, std::abs(dg.x() * r.y() - dg.y() * r.x()));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("parabolic unit circle: the rear track degenerates to the center") {
  const PlaneCurve c1 = named("circle:1");
  BackTrackOptions opt;
  opt.monodromy.transport.err_target = 1e-10;
  opt.monodromy.transport.max_steps = 1 << 18;
  const auto tracks = closed_back_tracks(c1, 1.0, opt);
  REQUIRE(tracks.size() == 1);
  const BackTrack& bt = tracks.front();
  CHECK(bt.branch == Stability::Neutral);
  double diam = 0;
  for (const auto& g : bt.gamma)
    diam = std::max(diam, (g - bt.gamma.front()).norm());
  CHECK(diam < 1e-4);
  CHECK(rotation_number_rear(bt) == 1);
  CHECK(bt.maslov == 0);
}

TEST_CASE("fish rear tracks across the bike-length regimes") {
  const PlaneCurve fish = named("fish");

  // ell = 0.5: hyperbolic, rho = 1, mu = 0
  {
    const auto tracks = closed_back_tracks(fish, 0.5);
    REQUIRE(tracks.size() == 2);
    for (const auto& bt : tracks) {
      CHECK(rotation_number_rear(bt) == 1);
      CHECK(bt.maslov == 0);
    }
    CHECK(rot_identity_residual(fish, tracks[0]) == 0);
  }

  // ell = 1: parabolic by construction; the track is the printed wave front
  {
    BackTrackOptions opt;
    opt.steps = 1 << 14;
    opt.monodromy.transport.err_target = 1e-10;
    opt.monodromy.transport.max_steps = 1 << 18;
    const auto tracks = closed_back_tracks(fish, 1.0, opt);
    REQUIRE(tracks.size() == 1);
    const BackTrack& bt = tracks.front();
    CHECK(rotation_number_rear(bt) == 0);
    CHECK(bt.maslov == 2);  // Maslov orientation calibration datum
    CHECK(bt.maslov_reliable);
    CHECK_FALSE(bt.cusp_sign_mismatch);
    CHECK(bt.cusps.size() == 2);
    CHECK(rot_identity_residual(fish, bt) == 0);

    double worst = 0;
    for (size_t k = 0; k < bt.t.size(); k += 7)
      worst = std::max(worst, (bt.gamma[k] - fish_gamma(bt.t[k])).norm());
    CHECK(worst < 1e-4);
  }

  // ell = 2: rho = 0, mu = 2
  {
    const auto tracks = closed_back_tracks(fish, 2.0);
    REQUIRE(tracks.size() == 2);
    CHECK(rotation_number_rear(tracks[0]) == 0);
    CHECK(tracks[0].maslov == 2);
    CHECK(rot_identity_residual(fish, tracks[0]) == 0);
    CHECK(tracks[0].rho == tracks[1].rho);
  }
}

TEST_CASE("length bound") {
  const PlaneCurve c2 = named("circle:2");
  const auto t2 = closed_back_tracks(c2, 1.0);
  const LengthBound lb2 = length_bound_check(c2, t2.front(), 1.0);
  CHECK(lb2.ok);
  CHECK_FALSE(lb2.equality);
  CHECK(lb2.length == doctest::Approx(4 * kPi).epsilon(1e-9));
  CHECK(lb2.rhs == doctest::Approx(2 * kPi).epsilon(1e-12));

  // equality exactly at the circle of radius ell
  const PlaneCurve c1 = named("circle:1");
  BackTrackOptions opt;
  opt.monodromy.transport.err_target = 1e-10;
  opt.monodromy.transport.max_steps = 1 << 18;
  const auto t1 = closed_back_tracks(c1, 1.0, opt);
  const LengthBound lb1 = length_bound_check(c1, t1.front(), 1.0);
  CHECK(lb1.ok);
  CHECK(lb1.equality);

  // rho = 0 makes the bound vacuous
  const PlaneCurve fish = named("fish");
  const auto tf = closed_back_tracks(fish, 1.5);
  const LengthBound lbf = length_bound_check(fish, tf.front(), 1.5);
  CHECK(lbf.rhs == 0.0);
  CHECK(lbf.ok);
}

TEST_CASE("forward iteration converges to the attracting angle at the eigen rate") {
  const PlaneCurve c = named("circle:1.05");
  const MonodromyReport rep = monodromy(c, 1.0);
  REQUIRE(rep.cls.type == Sl2Class::Hyperbolic);
  const double th_att = rep.fixed[0].theta;
  const double tr = std::abs(rep.trace);
  const double lam = (tr + std::sqrt(tr * tr - 4)) / 2;
  const double rate = 1.0 / (lam * lam);

  ThetaFlowOptions fo;
  fo.steps = 1 << 12;
  Rng rng(2718);
  int measured = 0;
  for (int trial = 0; trial < 32; ++trial) {
    double th = rng.uniform(-kPi, kPi);
    double prev_dist = std::abs(wrap(th - th_att));
    if (prev_dist < 1e-3 || std::abs(wrap(th - rep.fixed[1].theta)) < 1e-2)
      continue;
    for (int it = 0; it < 40; ++it) {
      th = theta_flow(c, 1.0, th, fo).back();
      const double dist = std::abs(wrap(th - th_att));
      if (prev_dist < 1e-2 && dist > 1e-9 && prev_dist > 1e-7) {
        const double r = dist / prev_dist;
        CHECK(r < 2 * rate);
        CHECK(r > rate / 2);
        ++measured;
        break;
      }
      prev_dist = dist;
      if (dist < 1e-10) break;
    }
  }
  CHECK(measured >= 16);
}

TEST_CASE("rotation identity holds across a random corpus") {
  Rng rng(90210);
  int tracks_checked = 0;
  for (int i = 0; i < 6; ++i) {
    const PlaneCurve c = random_convex_curve(rng);
    for (double ell : {0.7, 1.0}) {
      std::vector<BackTrack> tracks;
      try {
        tracks = closed_back_tracks(c, ell);
      } catch (const Error&) {
        continue;
      }
      for (const auto& bt : tracks) {
        if (!bt.closes || !bt.maslov_reliable) continue;
        CHECK(rot_identity_residual(c, bt) == 0);
        CHECK_FALSE(bt.cusp_sign_mismatch);
        CHECK(bt.noskid_residual < 1e-6);
        ++tracks_checked;
      }
    }
  }
  CHECK(tracks_checked >= 8);
}

TEST_CASE("marginal monodromies can be refused") {
  const PlaneCurve c1 = named("circle:1");
  BackTrackOptions opt;
  opt.require_margin = 1e-3;
  CHECK_THROWS_AS(closed_back_tracks(c1, 1.0, opt), MarginalClassification);
}
