#include "bikemono/scan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bikemono/parallel.hpp"

namespace bikemono {

namespace {

constexpr double kPi = std::numbers::pi;

MonodromySettings scan_monodromy_settings(const ScanSettings& s) {
  MonodromySettings ms;
  ms.tol = s.tol;
  ms.transport.steps = s.steps;
  ms.transport.record_samples = false;
  ms.transport.auto_refine = true;
  ms.transport.err_target = s.err_target;
  ms.transport.max_steps = s.max_steps;
  return ms;
}

PlaneCurve ellipse_curve(double a, double b) {
  CurveSpec spec;
  spec.kind = "ellipse";
  spec.params["a"] = a;
  spec.params["b"] = b;
  return make_named_curve(spec);
}

}  // namespace

// Product of the four edge exponentials in closed form:
//   tr = 1 + cosh a + cosh b - cosh a cosh b = 2 - 4 sinh^2(a/2) sinh^2(b/2),
// parabolic exactly on sinh(a/2) sinh(b/2) = 1. Cross-checked against direct
// integration of the frame equation and against the extremal rectangles
// (symmetric parabolic point at a = b = arccosh 3).
double rect_trace_closed_form(double a, double b) {
  const double p = std::sinh(a / 2) * std::sinh(b / 2);
  return 2.0 - 4.0 * p * p;
}

PhaseGrid scan_rectangles(const AxisSpec& a, const AxisSpec& b,
                          const ScanSettings& s) {
  if (!(a.min > 0) || !(b.min > 0))
    throw CurveSpecError("scan_rectangles: ranges must be positive");
  PhaseGrid g;
  g.a_axis = a;
  g.b_axis = b;
  g.ell = 1.0;
  g.provenance = "closed-form+numeric";
  g.cells.resize(static_cast<size_t>(a.count) * b.count);

  parallel_for(a.count * b.count, s.threads, [&](int idx) {
    const int ia = idx % a.count, ib = idx / a.count;
    PhaseCell& cell = g.cells[idx];
    cell.a = a.at(ia);
    cell.b = b.at(ib);
    PolygonPath rect;
    rect.closed = true;
    rect.vertices = {Vec2(0, 0), Vec2(cell.a, 0), Vec2(cell.a, cell.b),
                     Vec2(0, cell.b)};
    cell.trace = transport_polygon(rect, 1.0).monodromy.trace();
    cell.trace_closed_form = rect_trace_closed_form(cell.a, cell.b);
    cell.has_closed_form = true;
    const double margin = std::abs(cell.trace) - 2.0;
    cell.margin = margin;
    cell.cls = margin > s.tol    ? Sl2Class::Hyperbolic
               : margin < -s.tol ? Sl2Class::Elliptic
                                 : Sl2Class::Parabolic;
    cell.marginal = false;  // the polygon product is exact
  });

  double worst = 0;
  for (const auto& cell : g.cells) {
    worst = std::max(worst, std::abs(cell.trace - cell.trace_closed_form));
    const double cf_margin = std::abs(cell.trace_closed_form) - 2.0;
    const Sl2Class cf_cls = cf_margin > s.tol    ? Sl2Class::Hyperbolic
                            : cf_margin < -s.tol ? Sl2Class::Elliptic
                                                 : Sl2Class::Parabolic;
    if (cf_cls != cell.cls)
      throw NumericError("scan_rectangles: closed form and polygon product disagree");
  }
  g.max_closed_form_mismatch = worst;
  return g;
}

PhaseGrid scan_ellipses(const AxisSpec& a, const AxisSpec& b, double ell,
                        const ScanSettings& s) {
  if (!(a.min > 0) || !(b.min > 0))
    throw CurveSpecError("scan_ellipses: ranges must be positive");
  PhaseGrid g;
  g.a_axis = a;
  g.b_axis = b;
  g.ell = ell;
  g.provenance = "numeric";
  g.cells.resize(static_cast<size_t>(a.count) * b.count);
  const MonodromySettings ms = scan_monodromy_settings(s);

  parallel_for(a.count * b.count, s.threads, [&](int idx) {
    const int ia = idx % a.count, ib = idx / a.count;
    PhaseCell& cell = g.cells[idx];
    cell.a = a.at(ia);
    cell.b = b.at(ib);
    const MonodromyReport rep = monodromy(ellipse_curve(cell.a, cell.b), ell, ms);
    cell.trace = rep.trace;
    cell.margin = rep.cls.margin;
    cell.cls = rep.cls.type;
    cell.marginal = std::abs(rep.cls.margin) < 10 * rep.error_estimate ||
                    rep.cls.type == Sl2Class::Parabolic;
  });
  return g;
}

namespace {

struct TraceEval {
  const PlaneCurve& curve;
  MonodromySettings ms;

  MonodromyReport operator()(double ell) const { return monodromy(curve, ell, ms); }
};

void attach_track(const PlaneCurve& c, const MonodromySettings& ms, SweepCell& cell) {
  if (cell.cls != Sl2Class::Hyperbolic && cell.cls != Sl2Class::Parabolic) return;
  if (cell.marginal && cell.cls == Sl2Class::Hyperbolic) return;
  try {
    BackTrackOptions opt;
    opt.steps = 1 << 13;
    opt.monodromy = ms;
    const auto tracks = closed_back_tracks(c, cell.ell, opt);
    if (tracks.empty()) return;
    const BackTrack& bt = tracks.front();
    if (bt.rho_residual >= 1e-3) return;
    cell.has_track = true;
    cell.rho = bt.rho;
    cell.mu = bt.maslov;
    cell.mu_reliable = bt.maslov_reliable;
  } catch (const Error&) {
    cell.has_track = false;
  }
}

}  // namespace

SweepResult sweep_bike_length(const PlaneCurve& c, double ell_min, double ell_max,
                              int n, double bisection_tol, const ScanSettings& s) {
  if (!(ell_min > 0) || !(ell_max > ell_min))
    throw CurveSpecError("sweep_bike_length: need 0 < ell_min < ell_max");
  if (n < 2) throw CurveSpecError("sweep_bike_length: need n >= 2");
  if (!c.closed()) throw CurveSpecError("sweep_bike_length: closed curves only");

  SweepResult out;
  out.curve = c.name();
  out.ell_min = ell_min;
  out.ell_max = ell_max;
  out.bisection_tol = bisection_tol;
  out.cells.resize(n);

  const MonodromySettings ms = scan_monodromy_settings(s);
  const TraceEval eval{c, ms};

  parallel_for(n, s.threads, [&](int i) {
    SweepCell& cell = out.cells[i];
    cell.ell = ell_min + (ell_max - ell_min) * i / (n - 1);
    const MonodromyReport rep = eval(cell.ell);
    cell.trace = rep.trace;
    cell.margin = rep.cls.margin;
    cell.cls = rep.cls.type;
    cell.marginal = std::abs(rep.cls.margin) < 10 * rep.error_estimate ||
                    rep.cls.type == Sl2Class::Parabolic;
    attach_track(c, ms, cell);
  });

  // refine every class change between confident cells; marginal cells in
  // between belong to the transition band being bracketed
  auto margin_of = [&](double ell) { return eval(ell).cls.margin; };
  std::vector<int> solid;
  for (int i = 0; i < n; ++i)
    if (out.cells[i].cls != Sl2Class::Parabolic && !out.cells[i].marginal)
      solid.push_back(i);
  for (size_t si = 0; si + 1 < solid.size(); ++si) {
    const SweepCell& lo = out.cells[solid[si]];
    const SweepCell& hi = out.cells[solid[si + 1]];
    if (lo.cls == hi.cls) continue;

    SweepTransition tr;
    tr.class_lo = lo.cls;
    tr.class_hi = hi.cls;

    double a = lo.ell, b = hi.ell;
    double fa = lo.margin;
    // sub-sample to detect multiple crossings inside the bracket
    int changes = 0;
    double prev = fa, prev_x = a;
    double first_lo = a, first_hi = b;
    for (int j = 1; j <= 5; ++j) {
      const double x = a + (b - a) * j / 5.0;
      const double f = j == 5 ? hi.margin : margin_of(x);
      if ((f < 0) != (prev < 0)) {
        if (changes == 0) {
          first_lo = prev_x;
          first_hi = x;
        }
        ++changes;
      }
      prev = f;
      prev_x = x;
    }
    tr.confident = changes == 1;
    a = first_lo;
    b = first_hi;
    fa = margin_of(a);
    double m = 0.5 * (a + b), fm = 0;
    for (int it = 0; it < 200; ++it) {
      m = 0.5 * (a + b);
      fm = margin_of(m);
      if ((fm < 0) == (fa < 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
      if (b - a < bisection_tol && std::abs(fm) < 5e-7) break;
    }
    tr.ell_star = m;
    tr.width = b - a;
    tr.margin_at_star = std::abs(fm);
    out.transitions.push_back(tr);
  }
  return out;
}

// ---------------------------------------------------------------------------
// theorem suites

TheoremSuiteReport theorem_suites(const SuiteSettings& s) {
  TheoremSuiteReport rep;
  rep.seed = s.seed;
  ScanSettings scan;
  scan.tol = s.tol;
  scan.threads = 1;
  const MonodromySettings ms = scan_monodromy_settings(scan);

  // curvature-bound suite: max |kappa| <= 1, not identically 1 -> Hyperbolic
  {
    Rng rng(s.seed);
    std::vector<PlaneCurve> corpus;
    for (int i = 0; i < s.curvature_count; ++i)
      corpus.push_back(random_low_curvature_curve(rng));
    std::vector<SuiteViolation> vio(corpus.size());
    std::vector<int> flag(corpus.size(), 0), skip(corpus.size(), 0);
    parallel_for((int)corpus.size(), s.threads, [&](int i) {
      const PlaneCurve& c = corpus[i];
      const double mk = max_abs_curvature(c);
      if (mk > 1.0) {  // construction guarantees this never happens
        skip[i] = 1;
        return;
      }
      const MonodromyReport r = monodromy(c, 1.0, ms);
      if (std::abs(r.cls.margin) < 10 * r.error_estimate) {
        skip[i] = 1;
        return;
      }
      if (r.cls.type != Sl2Class::Hyperbolic) {
        flag[i] = 1;
        vio[i] = {"curvature-bound", c.name(), 1.0, r.trace, r.cls.margin,
                  "max|kappa| <= 1 but class is " + std::string(to_string(r.cls.type))};
      }
    });
    for (size_t i = 0; i < corpus.size(); ++i) {
      rep.curvature_bound_tested++;
      rep.marginal_excluded += skip[i];
      if (flag[i]) rep.violations.push_back(vio[i]);
    }
  }

  // length/area suite over a broad convex corpus
  {
    Rng rng(s.seed + 1);
    std::vector<PlaneCurve> corpus;
    for (int i = 0; i < s.convex_count; ++i) corpus.push_back(random_convex_curve(rng));
    std::vector<SuiteViolation> vio(corpus.size());
    std::vector<int> flag(corpus.size(), 0), skip(corpus.size(), 0);
    parallel_for((int)corpus.size(), s.threads, [&](int i) {
      const PlaneCurve& c = corpus[i];
      const GlobalInvariants gi = global_invariants(c);
      if (!gi.convex) {  // construction guarantees convexity
        skip[i] = 1;
        return;
      }
      const MonodromyReport r = monodromy(c, 1.0, ms);
      if (std::abs(r.cls.margin) < 10 * r.error_estimate) {
        skip[i] = 1;
        return;
      }
      if (r.cls.type == Sl2Class::Hyperbolic && !(gi.length > 2 * kPi - 1e-9)) {
        flag[i] = 1;
        vio[i] = {"length-bound", c.name(), 1.0, r.trace, r.cls.margin,
                  "hyperbolic but L = " + std::to_string(gi.length) + " <= 2 pi"};
        return;
      }
      if (gi.area > kPi && r.cls.type != Sl2Class::Hyperbolic) {
        flag[i] = 1;
        vio[i] = {"area-bound", c.name(), 1.0, r.trace, r.cls.margin,
                  "convex, area " + std::to_string(gi.area) +
                      " > pi but class is " + std::string(to_string(r.cls.type))};
      }
    });
    for (size_t i = 0; i < corpus.size(); ++i) {
      rep.length_bound_tested++;
      rep.area_bound_tested++;
      rep.marginal_excluded += skip[i];
      if (flag[i]) rep.violations.push_back(vio[i]);
    }
  }

  // scaling suite: c Gamma hyperbolic for c at and above max |kappa|
  if (s.corollary_count > 0) {
    Rng rng(s.seed + 2);
    std::vector<PlaneCurve> base;
    {
      CurveSpec fish;
      fish.kind = "fish";
      base.push_back(make_named_curve(fish));
      CurveSpec eight;
      eight.kind = "eight";
      base.push_back(make_named_curve(eight));
      base.push_back(ellipse_curve(2.0, 0.8));
    }
    while ((int)base.size() < s.corollary_count)
      base.push_back(random_convex_curve(rng));
    base.erase(base.begin() + std::min<size_t>(base.size(), s.corollary_count),
               base.end());
    for (const PlaneCurve& c : base) {
      rep.corollary_tested++;
      const double c0 = std::max(1.0, max_abs_curvature(c));
      for (double f : {1.02, 2.0, 4.0}) {
        const double scale = f * c0;
        const MonodromyReport r = monodromy(c.scaled(scale), 1.0, ms);
        if (std::abs(r.cls.margin) < 10 * r.error_estimate) {
          rep.marginal_excluded++;
          continue;
        }
        if (r.cls.type != Sl2Class::Hyperbolic) {
          rep.violations.push_back(
              {"scaling", c.name(), 1.0, r.trace, r.cls.margin,
               "scale factor " + std::to_string(scale) + " gives class " +
                   std::string(to_string(r.cls.type))});
        }
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// conjecture harness

ConjectureReport conjecture_harness(const HarnessSettings& s) {
  Rng rng(s.seed);
  std::vector<PlaneCurve> corpus;
  for (int i = 0; i < s.curves; ++i) corpus.push_back(random_convex_curve(rng));
  return conjecture_harness_on(corpus, s);
}

ConjectureReport conjecture_harness_on(const std::vector<PlaneCurve>& input,
                                       const HarnessSettings& s) {
  ConjectureReport rep;
  rep.seed = s.seed;
  ScanSettings scan;
  scan.tol = s.tol;
  const MonodromySettings ms = scan_monodromy_settings(scan);

  // convexity gate: the conjectures are about strictly convex fronts only
  std::vector<PlaneCurve> corpus;
  for (const PlaneCurve& c : input) {
    if (c.closed() && global_invariants(c).convex) {
      corpus.push_back(c);
    } else {
      rep.rejected_nonconvex++;
      rep.rejected.push_back(c.name());
    }
  }

  std::vector<HarnessCurveResult> results(corpus.size());
  parallel_for((int)corpus.size(), s.threads, [&](int ci) {
    const PlaneCurve& c = corpus[ci];
    HarnessCurveResult res;
    res.curve = c.name();

    const double scale = curve_length(c) / (2 * kPi);
    double lo = 0.3 * scale, hi = 2.6 * scale;
    auto class_at = [&](double ell) { return monodromy(c, ell, ms).cls; };
    for (int guard = 0; guard < 6 && class_at(lo).type != Sl2Class::Hyperbolic; ++guard)
      lo *= 0.5;
    for (int guard = 0; guard < 6 && class_at(hi).type != Sl2Class::Elliptic; ++guard)
      hi *= 2.0;
    if (class_at(lo).type != Sl2Class::Hyperbolic ||
        class_at(hi).type != Sl2Class::Elliptic) {
      res.inconclusive = true;
      results[ci] = std::move(res);
      return;
    }

    res.cells.resize(s.ell_cells);
    for (int i = 0; i < s.ell_cells; ++i) {
      SweepCell& cell = res.cells[i];
      cell.ell = lo + (hi - lo) * i / (s.ell_cells - 1);
      const MonodromyReport r = monodromy(c, cell.ell, ms);
      cell.trace = r.trace;
      cell.margin = r.cls.margin;
      cell.cls = r.cls.type;
      cell.marginal = std::abs(r.cls.margin) < 10 * r.error_estimate ||
                      r.cls.type == Sl2Class::Parabolic;
      attach_track(c, ms, cell);
    }

    // single-transition pattern over confident cells: H...H E...E
    int transitions = 0;
    Sl2Class prev = Sl2Class::Identity;
    bool seen = false;
    for (const auto& cell : res.cells) {
      if (cell.marginal) {
        res.excluded_cells++;
        continue;
      }
      if (cell.cls != Sl2Class::Hyperbolic && cell.cls != Sl2Class::Elliptic) {
        res.excluded_cells++;
        continue;
      }
      if (seen && cell.cls != prev) {
        ++transitions;
        if (prev == Sl2Class::Elliptic && cell.cls == Sl2Class::Hyperbolic)
          res.c2_ok = false;  // elliptic before hyperbolic: gap pattern
      }
      prev = cell.cls;
      seen = true;
    }
    res.transitions = transitions;
    if (transitions != 1) res.c2_ok = false;

    for (const auto& cell : res.cells) {
      if (!cell.has_track) continue;
      if (cell.rho != 1) res.c1_ok = false;
    }
    results[ci] = std::move(res);
  });

  for (auto& res : results) {
    rep.curves++;
    rep.excluded_cells += res.excluded_cells;
    if (res.inconclusive) {
      rep.inconclusive++;
    } else if (!res.c1_ok || !res.c2_ok) {
      rep.counterexamples.push_back(res);
    }
    rep.results.push_back(std::move(res));
  }
  return rep;
}

RectExtremals rect_parabolic_extremals() {
  // the parabolic family b(a) = 2 asinh(1 / sinh(a/2))
  auto b_of = [](double a) { return 2 * std::asinh(1.0 / std::sinh(a / 2)); };
  auto area = [&](double a) { return a * b_of(a); };
  auto perim = [&](double a) { return 2 * (a + b_of(a)); };

  auto golden = [](auto f, double lo, double hi, bool maximize) {
    const double phi = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    for (int it = 0; it < 200; ++it) {
      const double fc = maximize ? -f(c) : f(c);
      const double fd = maximize ? -f(d) : f(d);
      if (fc < fd)
        b = d;
      else
        a = c;
      c = b - phi * (b - a);
      d = a + phi * (b - a);
      if (b - a < 1e-12) break;
    }
    return 0.5 * (a + b);
  };

  RectExtremals out;
  const double a_area = golden(area, 0.5, 8.0, true);
  const double a_perim = golden(perim, 0.5, 8.0, false);
  out.a_symmetric = a_area;
  out.max_area = area(a_area);
  out.min_perimeter = perim(a_perim);
  return out;
}

}  // namespace bikemono
