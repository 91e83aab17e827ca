#include "bikemono/corpus.hpp"

#include <cmath>
#include <numbers>

namespace bikemono {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kGlX[7] = {0.0,
                            -0.4058451513773972, 0.4058451513773972,
                            -0.7415311855993945, 0.7415311855993945,
                            -0.9491079123427585, 0.9491079123427585};
constexpr double kGlW[7] = {0.4179591836734694,
                            0.3818300505051189, 0.3818300505051189,
                            0.2797053914892766, 0.2797053914892766,
                            0.1294849661688697, 0.1294849661688697};

CurveSpec support_spec(Rng& rng, double r0, double budget, int max_harmonic) {
  // draw raw amplitudes, then scale so sum (k^2 - 1) * amp_k == budget
  std::vector<double> a(max_harmonic - 1), b(max_harmonic - 1), amp(max_harmonic - 1);
  double weighted = 0;
  for (int i = 0; i + 2 <= max_harmonic; ++i) {
    const int k = i + 2;
    const double phase = rng.uniform(0, 2 * kPi);
    const double raw = rng.next_double();
    amp[i] = raw;
    a[i] = raw * std::cos(phase);
    b[i] = raw * std::sin(phase);
    weighted += (k * k - 1.0) * raw;
  }
  const double scale = weighted > 0 ? budget / weighted : 0.0;
  for (int i = 0; i + 2 <= max_harmonic; ++i) {
    a[i] *= scale;
    b[i] *= scale;
  }
  CurveSpec s;
  s.kind = "convex";
  s.params["r0"] = r0;
  s.arrays["a"] = std::move(a);
  s.arrays["b"] = std::move(b);
  return s;
}

}  // namespace

PlaneCurve random_convex_curve(Rng& rng, const ConvexCurveOptions& opt) {
  const double r0 = rng.uniform(opt.r0_min, opt.r0_max);
  const double budget = r0 * rng.uniform(0.05, opt.shape_budget);
  return make_named_curve(support_spec(rng, r0, budget, opt.max_harmonic));
}

std::vector<PlaneCurve> random_convex_curves(int count, std::uint64_t seed,
                                             const ConvexCurveOptions& opt) {
  Rng rng(seed);
  std::vector<PlaneCurve> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(random_convex_curve(rng, opt));
  return out;
}

PlaneCurve random_low_curvature_curve(Rng& rng, double min_radius) {
  const double r0 = rng.uniform(min_radius + 0.1, 2.8);
  const double budget = std::min(r0 - min_radius, 0.6 * r0) * rng.next_double();
  return make_named_curve(support_spec(rng, r0, budget, 5));
}

namespace {

// curvature profile kappa(s) = c0 + sum_k ck cos(2 pi k s / S) + dk sin(...)
struct ArcProfile {
  double S;
  double c0;
  std::vector<double> ck, dk;

  double kappa(double s) const {
    double v = c0;
    for (size_t k = 0; k < ck.size(); ++k) {
      const double w = 2 * kPi * (k + 1) / S;
      v += ck[k] * std::cos(w * s) + dk[k] * std::sin(w * s);
    }
    return v;
  }

  // integral of kappa from 0 to s (turning angle)
  double alpha(double s, double alpha0) const {
    double v = alpha0 + c0 * s;
    for (size_t k = 0; k < ck.size(); ++k) {
      const double w = 2 * kPi * (k + 1) / S;
      v += ck[k] * std::sin(w * s) / w - dk[k] * (std::cos(w * s) - 1.0) / w;
    }
    return v;
  }
};

PlaneCurve arc_from_profile(const ArcProfile& pr, double alpha0, int samples,
                            const char* name) {
  const double h = pr.S / samples;
  std::vector<Vec2> p(samples + 1), d1(samples + 1), d2(samples + 1);
  Vec2 pos(0, 0);
  for (int k = 0; k <= samples; ++k) {
    const double s = k * h;
    const double al = pr.alpha(s, alpha0);
    d1[k] = Vec2(std::cos(al), std::sin(al));
    d2[k] = pr.kappa(s) * Vec2(-std::sin(al), std::cos(al));
    p[k] = pos;
    if (k < samples) {
      Vec2 step(0, 0);
      for (int j = 0; j < 7; ++j) {
        const double sj = s + 0.5 * h * (1.0 + kGlX[j]);
        const double aj = pr.alpha(sj, alpha0);
        step += kGlW[j] * Vec2(std::cos(aj), std::sin(aj));
      }
      pos += 0.5 * h * step;
    }
  }
  return PlaneCurve::sampled_with_derivatives(name, std::move(p), std::move(d1),
                                              std::move(d2), 0, pr.S, false);
}

}  // namespace

PlaneCurve random_convex_arc(Rng& rng, double max_len, double max_turn,
                             int samples) {
  ArcProfile pr;
  pr.S = rng.uniform(0.4, max_len);
  // positive curvature: c0 above the total oscillation
  std::vector<double> amp(3);
  double osc = 0;
  for (int k = 0; k < 3; ++k) {
    amp[k] = rng.next_double();
    osc += amp[k];
  }
  // mean curvature, capped so that the total turn c0 * S <= max_turn
  const double c0 = rng.uniform(0.05, max_turn / pr.S);
  const double margin = rng.uniform(0.05, 0.9);
  const double scale = osc > 0 ? margin * c0 / osc : 0.0;
  pr.c0 = c0;
  for (int k = 0; k < 3; ++k) {
    const double phase = rng.uniform(0, 2 * kPi);
    pr.ck.push_back(scale * amp[k] * std::cos(phase));
    pr.dk.push_back(scale * amp[k] * std::sin(phase));
  }
  const double alpha0 = rng.uniform(0, 2 * kPi);
  return arc_from_profile(pr, alpha0, samples, "convex-arc");
}

PlaneCurve nearly_straight_arc(Rng& rng, double len, double kappa_scale) {
  ArcProfile pr;
  pr.S = len;
  pr.c0 = kappa_scale;
  pr.ck = {kappa_scale * 0.3, 0.0, 0.0};
  pr.dk = {0.0, kappa_scale * 0.2, 0.0};
  const double alpha0 = rng.uniform(0, 2 * kPi);
  return arc_from_profile(pr, alpha0, 1 << 14, "near-straight-arc");
}

}  // namespace bikemono
