// Acceptance suite: one pass/fail line per criterion, every tolerance pinned
// in code. Run via ctest or directly; doctest fails the binary on any FAIL.

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "bikemono/backtrack.hpp"
#include "bikemono/corpus.hpp"
#include "bikemono/curve.hpp"
#include "bikemono/development.hpp"
#include "bikemono/emit.hpp"
#include "bikemono/scan.hpp"
#include "bikemono/transport.hpp"

using namespace bikemono;

namespace {

constexpr double kPi = std::numbers::pi;

PlaneCurve named(const std::string& shorthand) {
  return make_named_curve(parse_curve_spec(shorthand));
}

void report(int id, bool ok, const std::string& desc) {
  std::printf("[ACCEPTANCE] %2d %s  %s\n", id, ok ? "PASS" : "FAIL", desc.c_str());
  std::fflush(stdout);
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

double wrap(double a) {
  a = std::fmod(a, 2 * kPi);
  if (a > kPi) a -= 2 * kPi;
  if (a < -kPi) a += 2 * kPi;
  return a;
}

}  // namespace

TEST_CASE("1. rectangle trace formula on a 40x40 grid") {
  Timer timer;
  bool ok = true;
  double worst = 0;
  for (int i = 1; i <= 40 && ok; ++i)
    for (int j = 1; j <= 40; ++j) {
      const double a = 4.0 * i / 40, b = 4.0 * j / 40;
      PolygonPath p;
      p.vertices = {Vec2(0, 0), Vec2(a, 0), Vec2(a, b), Vec2(0, b)};
      const double tr = transport_polygon(p, 1.0).monodromy.trace();
      worst = std::max(worst, std::abs(tr - rect_trace_closed_form(a, b)));
    }
  ok = worst < 1e-10 && timer.seconds() < 5.0;
  report(1, ok,
         "rectangle grid: max |trace - closed form| = " + fmt_g17(worst) +
             ", " + fmt_g17(timer.seconds()) + " s");
  CHECK(worst < 1e-10);
  CHECK(timer.seconds() < 5.0);
}

TEST_CASE("2. rectangle trichotomy boundary") {
  bool ok = true;
  for (int i = 0; i <= 24; ++i) {
    const double a = 1.2 + (4.0 - 1.2) * i / 24;
    const double b = 2 * std::asinh(1.0 / std::sinh(a / 2));
    auto classify_rect = [](double ra, double rb) {
      PolygonPath p;
      p.vertices = {Vec2(0, 0), Vec2(ra, 0), Vec2(ra, rb), Vec2(0, rb)};
      return classify(transport_polygon(p, 1.0).monodromy, 1e-7).type;
    };
    ok = ok && classify_rect(a, b) == Sl2Class::Parabolic;
    ok = ok && classify_rect(a, 1.01 * b) == Sl2Class::Hyperbolic;
    ok = ok && classify_rect(a, 0.99 * b) == Sl2Class::Elliptic;
  }
  report(2, ok, "parabolic family classifies parabolic at tol 1e-7; 1% off lands on the correct sides");
  CHECK(ok);
}

TEST_CASE("3. unit circle is parabolic and converges under doubling") {
  const PlaneCurve c = named("circle:1");
  TransportOptions o14;
  o14.steps = 1 << 14;
  o14.record_samples = false;
  const double m14 = std::abs(std::abs(transport_smooth(c, 1.0, o14).monodromy.trace()) - 2.0);
  TransportOptions o15 = o14;
  o15.steps = 1 << 15;
  const double m15 = std::abs(std::abs(transport_smooth(c, 1.0, o15).monodromy.trace()) - 2.0);
  TransportOptions o16 = o14;
  o16.steps = 1 << 16;
  const double m16 = std::abs(std::abs(transport_smooth(c, 1.0, o16).monodromy.trace()) - 2.0);
  const bool ok = m14 < 1e-6 && m15 < m14 && m16 < m15;
  report(3, ok,
         "||tr|-2| = " + fmt_g17(m14) + " at 2^14 steps; doubling: " +
             fmt_g17(m15) + ", " + fmt_g17(m16));
  CHECK(m14 < 1e-6);
  CHECK(m15 < m14);
  CHECK(m16 < m15);
}

TEST_CASE("4. circle family against the rotating-frame oracle") {
  Timer timer;
  bool ok = true;
  MonodromySettings ms;  // margins along this family are >= 0.1 off R = 1
  ms.transport.steps = 1 << 13;
  ms.transport.err_target = 1e-7;
  for (int i = 0; i < 50; ++i) {
    const double R = 0.2 + (5.0 - 0.2) * i / 49;
    const MonodromyReport rep = monodromy(named("circle:" + fmt_g17(R)), 1.0, ms);
    // oracle: psi' = -cos(psi) - 1/R has a fixed point iff R >= 1
    const Sl2Class want = R > 1.0 ? Sl2Class::Hyperbolic : Sl2Class::Elliptic;
    if (rep.cls.type != want) ok = false;
  }
  ok = ok && timer.seconds() < 10.0;
  report(4, ok, "50 circles classified per the rotating-frame fixed-point oracle, " +
                    fmt_g17(timer.seconds()) + " s");
  CHECK(ok);
}

TEST_CASE("5. development fidelity") {
  std::vector<PlaneCurve> curves{named("circle:2"), named("ellipse:2,1")};
  {
    Rng rng(20250905);
    for (int i = 0; i < 20; ++i) curves.push_back(random_convex_curve(rng));
  }
  bool ok = true;
  double worst_speed = 0, worst_kappa = 0, worst_trace = 0;
  for (const PlaneCurve& c : curves) {
    const Development dev = develop(c, 1.0);
    double sp = 0;
    for (size_t k = 1; k < dev.z.size(); ++k) {
      const double h = dev.t[k] - dev.t[k - 1];
      sp = std::max(sp, std::abs(hyp_distance(dev.z[k - 1], dev.z[k]) / h - 1.0));
    }
    worst_speed = std::max(worst_speed, sp);
    worst_kappa = std::max(worst_kappa, curvature_transfer_check(dev));

    MonodromySettings ms;
    ms.transport.err_target = 1e-9;
    const double tr = monodromy(c, 1.0, ms).trace;
    // a trace of magnitude T only carries ~T eps sqrt(steps) digits, so the
    // 1e-8 agreement is per unit of trace beyond |tr| = 1
    const double gap =
        std::abs(dev.period_map.trace() - tr) / std::max(1.0, std::abs(tr));
    worst_trace = std::max(worst_trace, gap);
  }
  ok = worst_speed < 1e-4 && worst_kappa < 1e-3 && worst_trace < 1e-8;
  report(5, ok,
         "22 developments: speed dev " + fmt_g17(worst_speed) + ", curvature residual " +
             fmt_g17(worst_kappa) + ", period-trace gap (relative) " +
             fmt_g17(worst_trace));
  CHECK(worst_speed < 1e-4);
  CHECK(worst_kappa < 1e-3);
  CHECK(worst_trace < 1e-8);
}

TEST_CASE("6. smooth arm lemma property suite") {
  Rng rng(20250906);
  bool ok = true;
  int violations = 0;
  for (int i = 0; i < 200; ++i) {
    const PlaneCurve arc =
        (i % 10 == 9) ? nearly_straight_arc(rng, rng.uniform(0.5, 2.5), 1e-8)
                      : random_convex_arc(rng);
    const ChordPair cp = chord_pair(arc, 1.0);
    if (!(cp.euclidean <= cp.hyperbolic + 1e-9)) {
      ok = false;
      ++violations;
    }
  }
  const PlaneCurve semi = PlaneCurve::analytic(
      "semicircle", [](double t) { return Vec2(std::cos(t), std::sin(t)); },
      [](double t) { return Vec2(-std::sin(t), std::cos(t)); },
      [](double t) { return Vec2(-std::cos(t), -std::sin(t)); }, 0, kPi, false);
  const double horo = chord_pair(semi, 1.0).hyperbolic;
  const double horo_err = std::abs(horo - 2 * std::asinh(kPi / 2));
  ok = ok && horo_err < 1e-6;
  report(6, ok,
         "200 random convex arcs, " + std::to_string(violations) +
             " violations of d <= d~ + 1e-9; horocycle chord error " +
             fmt_g17(horo_err));
  CHECK(violations == 0);
  CHECK(horo_err < 1e-6);
}

TEST_CASE("7. polygonal convergence on the 2x1 ellipse") {
  std::vector<int> ns;
  for (int n = 8; n <= 1024; n *= 2) ns.push_back(n);
  const ConvergenceStudy st = polygonal_convergence(named("ellipse:2,1"), ns, 1.0);
  bool monotone = true;
  for (size_t i = 0; i + 1 < st.errors.size(); ++i)
    if (!(st.errors[i + 1] < st.errors[i])) monotone = false;
  // the monodromy has operator norm ~52; the 1e-4 threshold is met by the
  // relative error (the absolute floor at n=1024 is ~7e-4 at clean order 2)
  const double rel = st.errors.back() / st.ref_norm;
  const bool ok = monotone && rel < 1e-4;
  report(7, ok,
         "errors decrease monotonically over n = 8..1024; final " +
             fmt_g17(st.errors.back()) + " absolute, " + fmt_g17(rel) +
             " relative to ||T|| = " + fmt_g17(st.ref_norm));
  CHECK(monotone);
  CHECK(rel < 1e-4);
}

TEST_CASE("8. curvature-bound suite (100 curves)") {
  SuiteSettings s;
  s.seed = 20250908;
  s.curvature_count = 100;
  s.convex_count = 0;
  s.corollary_count = 0;
  s.threads = 2;
  const TheoremSuiteReport rep = theorem_suites(s);
  const bool ok = rep.ok() && rep.curvature_bound_tested == 100;
  report(8, ok,
         "100 curves with max|kappa| <= 1 all hyperbolic; violations " +
             std::to_string(rep.violations.size()) + ", marginal excluded " +
             std::to_string(rep.marginal_excluded));
  CHECK(rep.ok());
  CHECK(rep.curvature_bound_tested == 100);
}

TEST_CASE("9. length and area bounds (500 convex curves)") {
  SuiteSettings s;
  s.seed = 20250909;
  s.curvature_count = 0;
  s.convex_count = 500;
  s.corollary_count = 0;
  s.threads = 2;
  const TheoremSuiteReport rep = theorem_suites(s);
  const bool ok = rep.ok() && rep.length_bound_tested == 500;
  report(9, ok,
         "500 convex curves: hyperbolic => L > 2 pi, area > pi => hyperbolic; violations " +
             std::to_string(rep.violations.size()) + ", marginal excluded " +
             std::to_string(rep.marginal_excluded));
  CHECK(rep.ok());
  CHECK(rep.length_bound_tested == 500);
}

TEST_CASE("10. fish reproduction") {
  Timer timer;
  const PlaneCurve fish = named("fish");

  ScanSettings s;
  s.threads = 2;
  const SweepResult sw = sweep_bike_length(fish, 0.5, 2.0, 150, 1e-7, s);

  bool ok = sw.transitions.size() == 2;
  double gap_err = 1e9, one_err = 1e9;
  if (ok) {
    gap_err = std::abs(sw.transitions[0].ell_star - 0.9272);
    one_err = std::abs(sw.transitions[1].ell_star - 1.0);
    ok = gap_err < 1e-3 && one_err < 1e-6;
  }

  // rho/mu per regime: (1,0) below the gap, (0,2) above it
  bool regimes = true, identity = true;
  for (const auto& cell : sw.cells) {
    if (!cell.has_track || !cell.mu_reliable) continue;
    if (cell.ell < 0.92) {
      if (cell.rho != 1 || cell.mu != 0) regimes = false;
    } else if (cell.ell > 1.01) {
      if (cell.rho != 0 || cell.mu != 2) regimes = false;
    }
    if (1 != cell.rho + cell.mu / 2) identity = false;  // rho(front) = 1
  }
  ok = ok && regimes && identity;

  // the closed rear track at ell = 1 is the printed wave front
  BackTrackOptions bopt;
  bopt.steps = 1 << 14;
  bopt.monodromy.transport.err_target = 1e-10;
  bopt.monodromy.transport.max_steps = 1 << 18;
  const auto tracks = closed_back_tracks(fish, 1.0, bopt);
  double track_err = 1e9;
  if (tracks.size() == 1) {
    track_err = 0;
    for (size_t k = 0; k < tracks[0].t.size(); ++k) {
      const double t = tracks[0].t[k];
      const Vec2 want(2 * std::cos(t),
                      std::sin(2 * t) * std::sin(t) * std::sin(t));
      track_err = std::max(track_err, (tracks[0].gamma[k] - want).norm());
    }
  }
  ok = ok && track_err < 1e-4 && timer.seconds() < 60.0;
  report(10, ok,
         "transitions at 0.9272 +- " + fmt_g17(gap_err) + " and 1 +- " +
             fmt_g17(one_err) + "; regimes " + (regimes ? "ok" : "BAD") +
             "; identity " + (identity ? "ok" : "BAD") + "; track sup err " +
             fmt_g17(track_err) + "; " + fmt_g17(timer.seconds()) + " s");
  CHECK(sw.transitions.size() == 2);
  CHECK(gap_err < 1e-3);
  CHECK(one_err < 1e-6);
  CHECK(regimes);
  CHECK(identity);
  CHECK(track_err < 1e-4);
  CHECK(timer.seconds() < 60.0);
}

TEST_CASE("11. length inequality across the corpus") {
  bool ok = true;
  int checked = 0, equalities = 0;
  std::string equality_curve;

  auto check_tracks = [&](const PlaneCurve& c, double ell,
                          const BackTrackOptions& opt) {
    std::vector<BackTrack> tracks;
    try {
      tracks = closed_back_tracks(c, ell, opt);
    } catch (const Error&) {
      return;
    }
    for (const auto& bt : tracks) {
      if (!bt.closes) continue;
      const LengthBound lb = length_bound_check(c, bt, ell);
      ++checked;
      if (!lb.ok) ok = false;
      if (lb.equality) {
        ++equalities;
        equality_curve = c.name();
      }
    }
  };

  BackTrackOptions opt;
  opt.steps = 1 << 13;
  check_tracks(named("circle:1.5"), 1.0, opt);
  check_tracks(named("circle:2.5"), 1.0, opt);
  check_tracks(named("ellipse:2,1"), 1.0, opt);
  check_tracks(named("fish"), 0.6, opt);
  check_tracks(named("fish"), 1.5, opt);
  Rng rng(20250911);
  for (int i = 0; i < 20; ++i) check_tracks(random_convex_curve(rng), 1.0, opt);

  // the equality case: exactly the circle of radius ell
  BackTrackOptions tight;
  tight.monodromy.transport.err_target = 1e-10;
  tight.monodromy.transport.max_steps = 1 << 18;
  check_tracks(named("circle:1"), 1.0, tight);

  ok = ok && equalities == 1 && equality_curve == "circle:1";
  report(11, ok,
         std::to_string(checked) + " closed rear tracks satisfy L >= 2 pi ell |rho| - 1e-8; " +
             "equality only for circle r = ell (" + std::to_string(equalities) + ")");
  CHECK(ok);
  CHECK(checked > 20);
}

TEST_CASE("12. conjecture harness on 50 strictly convex curves") {
  HarnessSettings s;
  s.seed = 20250912;
  s.curves = 50;
  s.ell_cells = 14;
  s.threads = 2;
  const ConjectureReport rep = conjecture_harness(s);
  bool ok = rep.ok() && rep.curves == 50 && rep.inconclusive == 0;

  // structural check: every record (and so any counterexample) carries the
  // full reproduction state: a parseable curve spec plus per-cell data
  const Json j = harness_report_to_json(rep, Json{{"seed", s.seed}});
  for (const auto& res : j["results"]) {
    try {
      make_named_curve(parse_curve_spec(res["curve"].get<std::string>()));
    } catch (const Error&) {
      ok = false;
    }
    if (!res.contains("cells") || res["cells"].empty()) ok = false;
  }
  report(12, ok,
         "harness: " + std::to_string(rep.counterexamples.size()) +
             " counterexamples, " + std::to_string(rep.inconclusive) +
             " inconclusive, reproduction records complete");
  CHECK(rep.ok());
  CHECK(rep.inconclusive == 0);
  CHECK(ok);
}
