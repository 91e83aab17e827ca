#include "bikemono/emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bikemono/version.hpp"

namespace bikemono {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<double> parse_csv_numbers(const std::string& s) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    out.push_back(std::strtod(s.substr(pos, next - pos).c_str(), nullptr));
    pos = next + 1;
  }
  return out;
}

std::string class_label(const PhaseCell& c) {
  if (c.cls == Sl2Class::Parabolic && c.marginal) return "parabolic?";
  return to_string(c.cls);
}

Sl2Class class_from_label(std::string s, bool* marginal) {
  if (marginal) *marginal = false;
  if (!s.empty() && s.back() == '?') {
    if (marginal) *marginal = true;
    s.pop_back();
  }
  if (s == "elliptic") return Sl2Class::Elliptic;
  if (s == "parabolic") return Sl2Class::Parabolic;
  if (s == "hyperbolic") return Sl2Class::Hyperbolic;
  if (s == "identity") return Sl2Class::Identity;
  throw CurveSpecError("unknown class label '" + s + "'");
}

}  // namespace

CurveSpec parse_curve_spec(const std::string& shorthand) {
  CurveSpec spec;
  const size_t colon = shorthand.find(':');
  spec.kind = shorthand.substr(0, colon);
  std::vector<double> v;
  if (colon != std::string::npos)
    v = parse_csv_numbers(shorthand.substr(colon + 1));

  auto need = [&](size_t n) {
    if (v.size() < n)
      throw CurveSpecError("curve '" + spec.kind + "': expected at least " +
                           std::to_string(n) + " parameters");
  };
  if (spec.kind == "circle") {
    need(1);
    spec.params["r"] = v[0];
  } else if (spec.kind == "ellipse") {
    need(2);
    spec.params["a"] = v[0];
    spec.params["b"] = v[1];
  } else if (spec.kind == "rect" || spec.kind == "rectangle") {
    need(2);
    spec.kind = "rect";
    spec.params["a"] = v[0];
    spec.params["b"] = v[1];
  } else if (spec.kind == "segment") {
    need(1);
    spec.params["len"] = v[0];
    if (v.size() > 1) spec.params["angle"] = v[1];
  } else if (spec.kind == "fish" || spec.kind == "eight") {
    // no parameters
  } else if (spec.kind == "fourier") {
    if (v.size() % 4 != 0 || v.empty())
      throw CurveSpecError("fourier: expected quadruples ax,bx,ay,by per harmonic");
    std::vector<double> ax, bx, ay, by;
    for (size_t k = 0; k * 4 < v.size(); ++k) {
      ax.push_back(v[4 * k]);
      bx.push_back(v[4 * k + 1]);
      ay.push_back(v[4 * k + 2]);
      by.push_back(v[4 * k + 3]);
    }
    spec.arrays = {{"ax", ax}, {"bx", bx}, {"ay", ay}, {"by", by}};
  } else if (spec.kind == "convex") {
    need(1);
    spec.params["r0"] = v[0];
    std::vector<double> a, b;
    for (size_t i = 1; i < v.size(); i += 2) {
      a.push_back(v[i]);
      b.push_back(i + 1 < v.size() ? v[i + 1] : 0.0);
    }
    spec.arrays = {{"a", a}, {"b", b}};
  } else {
    throw CurveSpecError("unknown curve kind '" + spec.kind + "'");
  }
  return spec;
}

Json curve_spec_to_json(const CurveSpec& spec) {
  Json j;
  j["kind"] = spec.kind;
  j["params"] = Json::object();
  for (const auto& [k, v] : spec.params) j["params"][k] = v;
  if (!spec.arrays.empty()) {
    j["arrays"] = Json::object();
    for (const auto& [k, v] : spec.arrays) j["arrays"][k] = v;
  }
  return j;
}

CurveSpec curve_spec_from_json(const Json& j) {
  CurveSpec spec;
  spec.kind = j.at("kind").get<std::string>();
  if (j.contains("params"))
    for (const auto& [k, v] : j.at("params").items())
      spec.params[k] = v.get<double>();
  if (j.contains("arrays"))
    for (const auto& [k, v] : j.at("arrays").items())
      spec.arrays[k] = v.get<std::vector<double>>();
  return spec;
}

Json sl2_to_json(const Sl2d& g) {
  return Json::array({Json::array({g.m(0, 0), g.m(0, 1)}),
                      Json::array({g.m(1, 0), g.m(1, 1)})});
}

Json monodromy_report_to_json(const MonodromyReport& rep, const Json& config) {
  Json j;
  j["version"] = kVersion;
  if (!config.is_null()) j["config"] = config;
  j["curve"] = rep.curve;
  j["ell"] = rep.ell;
  j["matrix"] = sl2_to_json(rep.matrix);
  j["trace"] = rep.trace;
  j["class"] = to_string(rep.cls.type);
  j["margin"] = rep.cls.margin;
  j["tolerance"] = rep.tol_used;
  j["error_estimate"] = rep.error_estimate;
  j["steps"] = rep.steps;
  Json fixed = Json::array();
  for (const auto& f : rep.fixed)
    fixed.push_back({{"theta", f.theta}, {"stability", to_string(f.stability)}});
  j["fixed"] = fixed;
  return j;
}

std::string phase_grid_to_csv(const PhaseGrid& g, const std::string& config_echo) {
  std::string out;
  out += "# bikemono " + std::string(kVersion) + "\n";
  if (!config_echo.empty()) out += "# config: " + config_echo + "\n";
  out += "# axes: a " + fmt_g17(g.a_axis.min) + " " + fmt_g17(g.a_axis.max) + " " +
         std::to_string(g.a_axis.count) + " b " + fmt_g17(g.b_axis.min) + " " +
         fmt_g17(g.b_axis.max) + " " + std::to_string(g.b_axis.count) + " ell " +
         fmt_g17(g.ell) + " provenance " + g.provenance + "\n";
  out += "a,b,trace,class\n";
  for (const auto& c : g.cells)
    out += fmt_g17(c.a) + "," + fmt_g17(c.b) + "," + fmt_g17(c.trace) + "," +
           class_label(c) + "\n";
  return out;
}

PhaseGrid phase_grid_from_csv(const std::string& text) {
  PhaseGrid g;
  std::istringstream in(text);
  std::string line;
  bool have_axes = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line);
      std::string hash, tag;
      ls >> hash >> tag;
      if (tag == "axes:") {
        std::string word;
        ls >> word >> g.a_axis.min >> g.a_axis.max >> g.a_axis.count;  // "a"
        ls >> word >> g.b_axis.min >> g.b_axis.max >> g.b_axis.count;  // "b"
        ls >> word >> g.ell;                                           // "ell"
        ls >> word >> g.provenance;                                    // "provenance"
        have_axes = true;
      }
      continue;
    }
    if (line.rfind("a,b,", 0) == 0) continue;  // header
    const size_t last = line.rfind(',');
    if (last == std::string::npos) continue;
    const auto nums = parse_csv_numbers(line.substr(0, last));
    if (nums.size() != 3) throw CurveSpecError("phase grid CSV: bad row '" + line + "'");
    PhaseCell c;
    c.a = nums[0];
    c.b = nums[1];
    c.trace = nums[2];
    c.cls = class_from_label(line.substr(last + 1), &c.marginal);
    c.margin = std::abs(c.trace) - 2.0;
    g.cells.push_back(c);
  }
  if (!have_axes) throw CurveSpecError("phase grid CSV: missing axes header");
  if (g.cells.size() != static_cast<size_t>(g.a_axis.count) * g.b_axis.count)
    throw CurveSpecError("phase grid CSV: cell count mismatch");
  if (g.provenance == "closed-form+numeric") {
    for (auto& c : g.cells) {
      c.trace_closed_form = rect_trace_closed_form(c.a, c.b);
      c.has_closed_form = true;
    }
  }
  return g;
}

std::string sweep_to_csv(const SweepResult& sw, const std::string& config_echo) {
  std::string out;
  out += "# bikemono " + std::string(kVersion) + "\n";
  if (!config_echo.empty()) out += "# config: " + config_echo + "\n";
  out += "# curve: " + sw.curve + "\n";
  out += "ell,trace,class,rho,mu\n";
  for (const auto& c : sw.cells) {
    out += fmt_g17(c.ell) + "," + fmt_g17(c.trace) + ",";
    out += (c.cls == Sl2Class::Parabolic && c.marginal) ? "parabolic?"
                                                        : to_string(c.cls);
    out += ",";
    if (c.has_track) out += std::to_string(c.rho);
    out += ",";
    if (c.has_track && c.mu_reliable) out += std::to_string(c.mu);
    out += "\n";
  }
  return out;
}

Json sweep_to_json(const SweepResult& sw, const Json& config) {
  Json j;
  j["version"] = kVersion;
  if (!config.is_null()) j["config"] = config;
  j["curve"] = sw.curve;
  j["ell_min"] = sw.ell_min;
  j["ell_max"] = sw.ell_max;
  j["bisection_tol"] = sw.bisection_tol;
  Json cells = Json::array();
  for (const auto& c : sw.cells) {
    Json jc;
    jc["ell"] = c.ell;
    jc["trace"] = c.trace;
    jc["class"] = to_string(c.cls);
    jc["marginal"] = c.marginal;
    if (c.has_track) {
      jc["rho"] = c.rho;
      if (c.mu_reliable) jc["mu"] = c.mu;
    }
    cells.push_back(jc);
  }
  j["cells"] = cells;
  Json trs = Json::array();
  for (const auto& t : sw.transitions) {
    trs.push_back({{"ell_star", t.ell_star},
                   {"width", t.width},
                   {"class_lo", to_string(t.class_lo)},
                   {"class_hi", to_string(t.class_hi)},
                   {"margin_at_star", t.margin_at_star},
                   {"confident", t.confident}});
  }
  j["transitions"] = trs;
  return j;
}

std::string development_to_csv(const Development& dev, const std::string& config_echo) {
  std::string out;
  out += "# bikemono " + std::string(kVersion) + "\n";
  if (!config_echo.empty()) out += "# config: " + config_echo + "\n";
  out += "# source: " + dev.source_name + " ell: " + fmt_g17(dev.ell) + "\n";
  out += "t,x,y\n";
  for (size_t k = 0; k < dev.z.size(); ++k)
    out += fmt_g17(dev.t[k]) + "," + fmt_g17(dev.z[k].real()) + "," +
           fmt_g17(dev.z[k].imag()) + "\n";
  return out;
}

std::string backtrack_to_csv(const BackTrack& bt, const std::string& config_echo) {
  std::string out;
  out += "# bikemono " + std::string(kVersion) + "\n";
  if (!config_echo.empty()) out += "# config: " + config_echo + "\n";
  out += "# ell: " + fmt_g17(bt.ell) + " branch: " + to_string(bt.branch) +
         " rho: " + std::to_string(bt.rho) + " mu: " + std::to_string(bt.maslov) +
         "\n";
  out += "t,gx,gy,theta,s\n";
  for (size_t k = 0; k < bt.t.size(); ++k)
    out += fmt_g17(bt.t[k]) + "," + fmt_g17(bt.gamma[k].x()) + "," +
           fmt_g17(bt.gamma[k].y()) + "," + fmt_g17(bt.theta[k]) + "," +
           fmt_g17(bt.s[k]) + "\n";
  return out;
}

std::string transport_to_csv(const TransportResult& tr, const std::string& config_echo) {
  std::string out;
  out += "# bikemono " + std::string(kVersion) + "\n";
  if (!config_echo.empty()) out += "# config: " + config_echo + "\n";
  out += "t,m11,m12,m21,m22\n";
  for (size_t k = 0; k < tr.t.size(); ++k) {
    const Mat2& m = tr.b[k].m;
    out += fmt_g17(tr.t[k]) + "," + fmt_g17(m(0, 0)) + "," + fmt_g17(m(0, 1)) +
           "," + fmt_g17(m(1, 0)) + "," + fmt_g17(m(1, 1)) + "\n";
  }
  return out;
}

Json suite_report_to_json(const TheoremSuiteReport& rep, const Json& config) {
  Json j;
  j["version"] = kVersion;
  if (!config.is_null()) j["config"] = config;
  j["seed"] = rep.seed;
  j["curvature_bound_tested"] = rep.curvature_bound_tested;
  j["length_bound_tested"] = rep.length_bound_tested;
  j["area_bound_tested"] = rep.area_bound_tested;
  j["scaling_tested"] = rep.corollary_tested;
  j["marginal_excluded"] = rep.marginal_excluded;
  j["ok"] = rep.ok();
  Json v = Json::array();
  for (const auto& x : rep.violations)
    v.push_back({{"suite", x.suite},
                 {"curve", x.curve},
                 {"ell", x.ell},
                 {"trace", x.trace},
                 {"margin", x.margin},
                 {"detail", x.detail}});
  j["violations"] = v;
  const RectExtremals ex = rect_parabolic_extremals();
  j["rect_parabolic_extremals"] = {{"a_symmetric", ex.a_symmetric},
                                   {"max_area", ex.max_area},
                                   {"min_perimeter", ex.min_perimeter}};
  return j;
}

namespace {

Json harness_curve_to_json(const HarnessCurveResult& res) {
  Json j;
  j["curve"] = res.curve;
  j["transitions"] = res.transitions;
  j["c1_ok"] = res.c1_ok;
  j["c2_ok"] = res.c2_ok;
  j["inconclusive"] = res.inconclusive;
  j["excluded_cells"] = res.excluded_cells;
  Json cells = Json::array();
  for (const auto& c : res.cells) {
    Json jc;
    jc["ell"] = c.ell;
    jc["trace"] = c.trace;
    jc["class"] = to_string(c.cls);
    jc["marginal"] = c.marginal;
    if (c.has_track) jc["rho"] = c.rho;
    cells.push_back(jc);
  }
  j["cells"] = cells;
  return j;
}

}  // namespace

Json harness_report_to_json(const ConjectureReport& rep, const Json& config) {
  Json j;
  j["version"] = kVersion;
  if (!config.is_null()) j["config"] = config;
  j["seed"] = rep.seed;
  j["curves"] = rep.curves;
  j["inconclusive"] = rep.inconclusive;
  j["excluded_cells"] = rep.excluded_cells;
  j["rejected_nonconvex"] = rep.rejected_nonconvex;
  if (!rep.rejected.empty()) j["rejected"] = rep.rejected;
  j["ok"] = rep.ok();
  Json ce = Json::array();
  for (const auto& res : rep.counterexamples) ce.push_back(harness_curve_to_json(res));
  j["counterexamples"] = ce;
  Json all = Json::array();
  for (const auto& res : rep.results) all.push_back(harness_curve_to_json(res));
  j["results"] = all;
  return j;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

// Maps data coordinates into a y-flipped viewport with margins.
struct ViewMap {
  double x0, y0, x1, y1;  // data bbox
  double w, h, margin;

  double sx(double x) const {
    return margin + (x - x0) / std::max(x1 - x0, 1e-300) * (w - 2 * margin);
  }
  double sy(double y) const {
    return h - margin - (y - y0) / std::max(y1 - y0, 1e-300) * (h - 2 * margin);
  }
};

const char* class_color(Sl2Class c) {
  switch (c) {
    case Sl2Class::Elliptic: return "#4575b4";
    case Sl2Class::Parabolic: return "#ffffbf";
    case Sl2Class::Hyperbolic: return "#d73027";
    case Sl2Class::Identity: return "#999999";
  }
  return "#000000";
}

std::string svg_header(double w, double h, const std::string& title,
                       const std::string& config_echo) {
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_g17(w) +
         "\" height=\"" + fmt_g17(h) + "\" viewBox=\"0 0 " + fmt_g17(w) + " " +
         fmt_g17(h) + "\">\n";
  out += "<!-- bikemono " + std::string(kVersion) + " -->\n";
  if (!config_echo.empty()) out += "<!-- config: " + config_echo + " -->\n";
  if (!title.empty())
    out += "<text x=\"" + fmt_g17(w / 2) +
           "\" y=\"16\" text-anchor=\"middle\" font-size=\"13\" "
           "font-family=\"sans-serif\">" +
           title + "</text>\n";
  return out;
}

std::string svg_polyline(const std::vector<Vec2>& pts, const ViewMap& vm,
                         const std::string& color, double width) {
  std::string out = "<polyline fill=\"none\" stroke=\"" + color +
                    "\" stroke-width=\"" + fmt_g17(width) + "\" points=\"";
  char buf[64];
  for (const auto& p : pts) {
    std::snprintf(buf, sizeof buf, "%.3f,%.3f ", vm.sx(p.x()), vm.sy(p.y()));
    out += buf;
  }
  out += "\"/>\n";
  return out;
}

}  // namespace

std::string svg_phase_grid(const PhaseGrid& g, const std::string& title,
                           const std::string& config_echo) {
  const double w = 560, h = 560;
  std::string out = svg_header(w, h, title, config_echo);
  const double margin = 46;
  const double cw = (w - 2 * margin) / g.a_axis.count;
  const double ch = (h - 2 * margin) / g.b_axis.count;
  char buf[256];
  for (int ib = 0; ib < g.b_axis.count; ++ib)
    for (int ia = 0; ia < g.a_axis.count; ++ia) {
      const PhaseCell& c = g.at(ia, ib);
      const double x = margin + ia * cw;
      const double y = h - margin - (ib + 1) * ch;
      std::snprintf(buf, sizeof buf,
                    "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                    "fill=\"%s\"/>\n",
                    x, y, cw + 0.5, ch + 0.5, class_color(c.cls));
      out += buf;
    }
  // axis labels
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" font-family=\"sans-serif\">a: %s .. %s</text>\n",
                margin, h - margin + 26.0, fmt_g17(g.a_axis.min).c_str(),
                fmt_g17(g.a_axis.max).c_str());
  out += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" font-family=\"sans-serif\" transform=\"rotate(-90 14 %.1f)\">b: %s .. %s</text>\n",
                14.0, h - margin, h - margin, fmt_g17(g.b_axis.min).c_str(),
                fmt_g17(g.b_axis.max).c_str());
  out += buf;
  // legend
  const char* names[3] = {"elliptic", "parabolic", "hyperbolic"};
  const Sl2Class classes[3] = {Sl2Class::Elliptic, Sl2Class::Parabolic,
                               Sl2Class::Hyperbolic};
  for (int i = 0; i < 3; ++i) {
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"26\" width=\"10\" height=\"10\" fill=\"%s\"/>"
                  "<text x=\"%.1f\" y=\"35\" font-size=\"10\" font-family=\"sans-serif\">%s</text>\n",
                  margin + 150.0 * i, class_color(classes[i]),
                  margin + 150.0 * i + 14, names[i]);
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

std::string svg_curves(const std::vector<CurvePlot>& plots,
                       const std::vector<MarkerSet>& markers,
                       const std::string& title, const std::string& config_echo) {
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const auto& pl : plots)
    for (const auto& p : pl.points) {
      x0 = std::min(x0, p.x());
      y0 = std::min(y0, p.y());
      x1 = std::max(x1, p.x());
      y1 = std::max(y1, p.y());
    }
  if (x0 > x1) {
    x0 = y0 = 0;
    x1 = y1 = 1;
  }
  // keep the aspect ratio square
  const double cx = (x0 + x1) / 2, cy = (y0 + y1) / 2;
  const double half = std::max(x1 - x0, y1 - y0) / 2 * 1.05 + 1e-12;
  const double w = 560, h = 560;
  ViewMap vm{cx - half, cy - half, cx + half, cy + half, w, h, 30};

  std::string out = svg_header(w, h, title, config_echo);
  for (const auto& pl : plots) out += svg_polyline(pl.points, vm, pl.color, pl.width);
  char buf[128];
  for (const auto& ms : markers)
    for (const auto& p : ms.points) {
      std::snprintf(buf, sizeof buf,
                    "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.2f\" fill=\"%s\"/>\n",
                    vm.sx(p.x()), vm.sy(p.y()), ms.radius, ms.color.c_str());
      out += buf;
    }
  out += "</svg>\n";
  return out;
}

std::string svg_development_disk(const Development& dev, int window,
                                 const std::string& config_echo) {
  std::vector<CurvePlot> plots;
  CurvePlot disk;
  disk.color = "#888888";
  disk.width = 1.0;
  for (int i = 0; i <= 256; ++i) {
    const double a = 2 * 3.14159265358979323846 * i / 256;
    disk.points.emplace_back(std::cos(a), std::sin(a));
  }
  plots.push_back(std::move(disk));

  CurvePlot dv;
  dv.color = "#1f77b4";
  Sl2d hp;
  for (int m = 0; m < std::max(1, window); ++m) {
    for (size_t k = 0; k < dev.z.size(); ++k) {
      const auto z = m == 0 ? dev.z[k] : moebius_half_plane(hp, dev.z[k]);
      const auto w = cayley_disk(z);
      dv.points.emplace_back(w.real(), w.imag());
    }
    if (dev.has_period_map) hp = dev.period_map * hp;
  }
  plots.push_back(std::move(dv));
  return svg_curves(plots, {}, "development (" + dev.source_name + ")",
                    config_echo);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  f << content;
  if (!f) throw Error("write failed: " + path);
}

}  // namespace bikemono
