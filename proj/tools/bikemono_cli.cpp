// bikemono: bicycle monodromy of plane curves
//
// Subcommands: classify, develop, backtrack, scan-rect, scan-ellipse,
// sweep-ell, verify, conjectures, fish-demo.
// Exit codes: 0 ok, 1 numeric failure, 2 usage error, 3 counterexample.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include "bikemono/backtrack.hpp"
#include "bikemono/corpus.hpp"
#include "bikemono/curve.hpp"
#include "bikemono/development.hpp"
#include "bikemono/emit.hpp"
#include "bikemono/scan.hpp"
#include "bikemono/transport.hpp"
#include "bikemono/version.hpp"

namespace bm = bikemono;

namespace {

struct RangeSpec {
  double min = 0, max = 1;
  int count = 2;
};

RangeSpec parse_range(const std::string& s) {
  RangeSpec r;
  const size_t c1 = s.find(':');
  const size_t c2 = c1 == std::string::npos ? std::string::npos : s.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw CLI::ValidationError("range", "expected min:max:count, got '" + s + "'");
  r.min = std::strtod(s.substr(0, c1).c_str(), nullptr);
  r.max = std::strtod(s.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr);
  r.count = std::atoi(s.substr(c2 + 1).c_str());
  if (r.count < 2)
    throw CLI::ValidationError("range", "count must be >= 2 in '" + s + "'");
  return r;
}

int default_threads() {
  if (const char* env = std::getenv("BIKEMONO_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(8u, hw == 0 ? 1u : hw));
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const size_t dot = path.rfind('.');
  if (dot == std::string::npos || path.find('/', dot) != std::string::npos)
    return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

bm::PlaneCurve curve_from_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{')
    return bm::make_named_curve(bm::curve_spec_from_json(bm::Json::parse(arg)));
  return bm::make_named_curve(bm::parse_curve_spec(arg));
}

std::vector<bm::Vec2> sample_curve(const bm::PlaneCurve& c, int n) {
  std::vector<bm::Vec2> pts;
  pts.reserve(n + 1);
  for (int i = 0; i <= n; ++i)
    pts.push_back(c.position(c.t0() + c.span() * i / n));
  return pts;
}

void emit_backtrack_svg(const bm::PlaneCurve& front,
                        const std::vector<bm::BackTrack>& tracks,
                        const std::string& path, const std::string& echo) {
  std::vector<bm::CurvePlot> plots;
  bm::CurvePlot f;
  f.points = sample_curve(front, 1024);
  f.color = "#1f77b4";
  plots.push_back(std::move(f));
  std::vector<bm::MarkerSet> markers;
  for (const auto& bt : tracks) {
    bm::CurvePlot g;
    g.points = bt.gamma;
    g.color = bt.branch == bm::Stability::Repelling ? "#ff9896" : "#d62728";
    plots.push_back(std::move(g));
    bm::MarkerSet cusps;
    cusps.color = "#000000";
    for (const auto& cu : bt.cusps) {
      // mark the gamma sample nearest to the cusp parameter
      const size_t n = bt.t.size() - 1;
      const double u = (cu.t - bt.t.front()) / (bt.t.back() - bt.t.front());
      const size_t k = std::min(n, static_cast<size_t>(u * n + 0.5));
      cusps.points.push_back(bt.gamma[k]);
    }
    if (!cusps.points.empty()) markers.push_back(std::move(cusps));
  }
  bm::write_text_file(
      path, bm::svg_curves(plots, markers, "front and rear tracks", echo));
}

int run(int argc, char** argv) {
  CLI::App app{"bicycle monodromy of plane curves"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = default_threads();
  app.add_option("--threads", threads, "worker threads for grids and sweeps");

  // ---- classify
  auto* sc_classify = app.add_subcommand("classify", "monodromy report for a closed curve");
  std::string cl_curve;
  double cl_ell = 1.0, cl_tol = 1e-7, cl_err = 1e-8;
  int cl_steps = 1 << 14;
  std::string cl_json, cl_samples;
  sc_classify->add_option("--curve", cl_curve, "curve spec, e.g. ellipse:2,1")->required();
  sc_classify->add_option("--ell", cl_ell, "bike length");
  sc_classify->add_option("--steps", cl_steps, "transport steps");
  sc_classify->add_option("--tol", cl_tol, "parabolic tolerance on |tr|-2");
  sc_classify->add_option("--err-target", cl_err, "auto-refine error target");
  sc_classify->add_option("--json", cl_json, "write the report JSON here");
  sc_classify->add_option("--samples-csv", cl_samples, "stream (t, b(t)) samples as CSV");

  // ---- develop
  auto* sc_dev = app.add_subcommand("develop", "hyperbolic development of a front track");
  std::string dv_curve, dv_csv, dv_svg;
  double dv_ell = 1.0;
  int dv_steps = 1 << 12, dv_window = 1;
  sc_dev->add_option("--curve", dv_curve)->required();
  sc_dev->add_option("--ell", dv_ell);
  sc_dev->add_option("--steps", dv_steps);
  sc_dev->add_option("--window", dv_window, "periods drawn in the disk SVG");
  sc_dev->add_option("--csv", dv_csv);
  sc_dev->add_option("--svg", dv_svg);

  // ---- backtrack
  auto* sc_bt = app.add_subcommand("backtrack", "closed rear tracks from the monodromy");
  std::string bt_curve, bt_csv, bt_svg;
  double bt_ell = 1.0;
  int bt_steps = 1 << 14;
  sc_bt->add_option("--curve", bt_curve)->required();
  sc_bt->add_option("--ell", bt_ell);
  double bt_tol = 1e-7;
  sc_bt->add_option("--steps", bt_steps);
  sc_bt->add_option("--tol", bt_tol, "parabolic tolerance on |tr|-2");
  sc_bt->add_option("--csv", bt_csv, "CSV path (suffixed per track)");
  sc_bt->add_option("--svg", bt_svg);

  // ---- scan-rect / scan-ellipse
  auto* sc_rect = app.add_subcommand("scan-rect", "rectangle phase diagram");
  std::string ra, rb, rect_csv, rect_svg;
  double rect_tol = 1e-7;
  sc_rect->add_option("--a", ra, "a range min:max:count")->required();
  sc_rect->add_option("--b", rb, "b range min:max:count")->required();
  sc_rect->add_option("--tol", rect_tol, "parabolic tolerance on |tr|-2");
  sc_rect->add_option("--csv", rect_csv);
  sc_rect->add_option("--svg", rect_svg);

  auto* sc_ell = app.add_subcommand("scan-ellipse", "ellipse phase diagram");
  std::string ea, eb, ell_csv, ell_svg;
  double ell_ell = 1.0;
  int ell_steps = 1 << 12;
  double ell_tol = 1e-7, ell_err = 1e-7;
  sc_ell->add_option("--a", ea)->required();
  sc_ell->add_option("--b", eb)->required();
  sc_ell->add_option("--ell", ell_ell);
  sc_ell->add_option("--steps", ell_steps);
  sc_ell->add_option("--tol", ell_tol, "parabolic tolerance on |tr|-2");
  sc_ell->add_option("--err-target", ell_err, "auto-refine error target");
  sc_ell->add_option("--csv", ell_csv);
  sc_ell->add_option("--svg", ell_svg);

  // ---- sweep-ell
  auto* sc_sweep = app.add_subcommand("sweep-ell", "bike-length sweep with transitions");
  std::string sw_curve, sw_range, sw_csv, sw_json;
  double sw_bisect = 1e-6;
  sc_sweep->add_option("--curve", sw_curve)->required();
  sc_sweep->add_option("--ell", sw_range, "ell range min:max:count")->required();
  double sw_tol = 1e-7, sw_err = 1e-7;
  sc_sweep->add_option("--bisect-tol", sw_bisect);
  sc_sweep->add_option("--tol", sw_tol, "parabolic tolerance on |tr|-2");
  sc_sweep->add_option("--err-target", sw_err, "auto-refine error target");
  sc_sweep->add_option("--csv", sw_csv);
  sc_sweep->add_option("--json", sw_json);

  // ---- verify
  auto* sc_verify = app.add_subcommand("verify", "falsifiable batch suites");
  std::uint64_t vf_seed = 20250901;
  int vf_curv = 100, vf_convex = 500;
  std::string vf_json;
  sc_verify->add_option("--seed", vf_seed);
  sc_verify->add_option("--curvature-n", vf_curv, "curvature-bound corpus size");
  sc_verify->add_option("--convex-n", vf_convex, "convex corpus size");
  sc_verify->add_option("--json", vf_json);

  // ---- conjectures
  auto* sc_conj = app.add_subcommand("conjectures", "single-transition and rho=1 harness");
  std::uint64_t cj_seed = 20250902;
  int cj_curves = 50, cj_cells = 14;
  std::string cj_json;
  sc_conj->add_option("--seed", cj_seed);
  sc_conj->add_option("--curves", cj_curves);
  sc_conj->add_option("--cells", cj_cells);
  sc_conj->add_option("--json", cj_json);

  // ---- fish-demo
  auto* sc_fish = app.add_subcommand("fish-demo", "front/rear track panels for the fish example");
  std::string fd_out = ".";
  sc_fish->add_option("--out", fd_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (sc_classify->parsed()) {
    const bm::PlaneCurve c = curve_from_arg(cl_curve);
    bm::MonodromySettings ms;
    ms.tol = cl_tol;
    ms.transport.steps = cl_steps;
    ms.transport.auto_refine = true;
    ms.transport.err_target = cl_err;
    const bm::MonodromyReport rep = bm::monodromy(c, cl_ell, ms);
    bm::Json config{{"subcommand", "classify"}, {"curve", cl_curve},
                    {"ell", cl_ell},           {"steps", cl_steps},
                    {"tol", cl_tol},           {"err_target", cl_err}};
    const bm::Json j = bm::monodromy_report_to_json(rep, config);
    std::cout << j.dump(2) << "\n";
    if (!cl_json.empty()) bm::write_text_file(cl_json, j.dump(2) + "\n");
    if (!cl_samples.empty()) {
      bm::TransportOptions topt;
      topt.steps = rep.steps;
      topt.record_samples = true;
      const bm::TransportResult tr = bm::transport_smooth(c, cl_ell, topt);
      bm::write_text_file(cl_samples, bm::transport_to_csv(tr, config.dump()));
    }
    return 0;
  }

  if (sc_dev->parsed()) {
    const bm::PlaneCurve c = curve_from_arg(dv_curve);
    bm::DevelopOptions opt;
    opt.steps = dv_steps;
    const bm::Development dev = bm::develop(c, dv_ell, opt);
    bm::Json config{{"subcommand", "develop"}, {"curve", dv_curve},
                    {"ell", dv_ell},           {"steps", dv_steps}};
    if (!dv_csv.empty())
      bm::write_text_file(dv_csv, bm::development_to_csv(dev, config.dump()));
    if (!dv_svg.empty())
      bm::write_text_file(dv_svg,
                          bm::svg_development_disk(dev, dv_window, config.dump()));
    std::cout << "developed " << dev.z.size() << " samples; period map "
              << (dev.has_period_map ? "present" : "absent") << "\n";
    return 0;
  }

  if (sc_bt->parsed()) {
    const bm::PlaneCurve c = curve_from_arg(bt_curve);
    bm::BackTrackOptions opt;
    opt.steps = bt_steps;
    opt.monodromy.tol = bt_tol;
    const auto tracks = bm::closed_back_tracks(c, bt_ell, opt);
    bm::Json config{{"subcommand", "backtrack"}, {"curve", bt_curve},
                    {"ell", bt_ell},             {"steps", bt_steps}};
    std::cout << tracks.size() << " closed rear track(s)\n";
    for (size_t i = 0; i < tracks.size(); ++i) {
      const auto& bt = tracks[i];
      std::cout << "  " << to_string(bt.branch) << ": rho=" << bt.rho
                << " mu=" << bt.maslov << " cusps=" << bt.cusps.size()
                << " closure_gap=" << bt.closure_pos_gap << "\n";
      if (!bt_csv.empty()) {
        const std::string path =
            tracks.size() == 1
                ? bt_csv
                : with_suffix(bt_csv, std::string(".") + to_string(bt.branch));
        bm::write_text_file(path, bm::backtrack_to_csv(bt, config.dump()));
      }
    }
    if (!bt_svg.empty()) emit_backtrack_svg(c, tracks, bt_svg, config.dump());
    return 0;
  }

  if (sc_rect->parsed()) {
    const RangeSpec a = parse_range(ra), b = parse_range(rb);
    bm::ScanSettings s;
    s.threads = threads;
    s.tol = rect_tol;
    const bm::PhaseGrid g = bm::scan_rectangles({a.min, a.max, a.count},
                                                {b.min, b.max, b.count}, s);
    bm::Json config{{"subcommand", "scan-rect"}, {"a", ra}, {"b", rb}};
    if (!rect_csv.empty())
      bm::write_text_file(rect_csv, bm::phase_grid_to_csv(g, config.dump()));
    if (!rect_svg.empty())
      bm::write_text_file(rect_svg,
                          bm::svg_phase_grid(g, "rectangle monodromy classes",
                                             config.dump()));
    std::cout << "scanned " << g.cells.size() << " rectangles; max closed-form "
              << "mismatch " << g.max_closed_form_mismatch << "\n";
    return 0;
  }

  if (sc_ell->parsed()) {
    const RangeSpec a = parse_range(ea), b = parse_range(eb);
    bm::ScanSettings s;
    s.threads = threads;
    s.steps = ell_steps;
    s.tol = ell_tol;
    s.err_target = ell_err;
    const bm::PhaseGrid g = bm::scan_ellipses({a.min, a.max, a.count},
                                              {b.min, b.max, b.count}, ell_ell, s);
    bm::Json config{{"subcommand", "scan-ellipse"},
                    {"a", ea},
                    {"b", eb},
                    {"ell", ell_ell},
                    {"steps", ell_steps}};
    if (!ell_csv.empty())
      bm::write_text_file(ell_csv, bm::phase_grid_to_csv(g, config.dump()));
    if (!ell_svg.empty())
      bm::write_text_file(
          ell_svg, bm::svg_phase_grid(g, "ellipse monodromy classes", config.dump()));
    std::cout << "scanned " << g.cells.size() << " ellipses\n";
    return 0;
  }

  if (sc_sweep->parsed()) {
    const bm::PlaneCurve c = curve_from_arg(sw_curve);
    const RangeSpec r = parse_range(sw_range);
    bm::ScanSettings s;
    s.threads = threads;
    s.tol = sw_tol;
    s.err_target = sw_err;
    const bm::SweepResult sw =
        bm::sweep_bike_length(c, r.min, r.max, r.count, sw_bisect, s);
    bm::Json config{{"subcommand", "sweep-ell"},
                    {"curve", sw_curve},
                    {"ell", sw_range},
                    {"bisect_tol", sw_bisect}};
    if (!sw_csv.empty())
      bm::write_text_file(sw_csv, bm::sweep_to_csv(sw, config.dump()));
    if (!sw_json.empty())
      bm::write_text_file(sw_json, bm::sweep_to_json(sw, config).dump(2) + "\n");
    std::cout << sw.transitions.size() << " transition(s)";
    for (const auto& t : sw.transitions) std::cout << " " << bm::fmt_g17(t.ell_star);
    std::cout << "\n";
    return 0;
  }

  if (sc_verify->parsed()) {
    bm::SuiteSettings s;
    s.seed = vf_seed;
    s.curvature_count = vf_curv;
    s.convex_count = vf_convex;
    s.threads = threads;
    const bm::TheoremSuiteReport rep = bm::theorem_suites(s);
    bm::Json config{{"subcommand", "verify"},
                    {"seed", vf_seed},
                    {"curvature_n", vf_curv},
                    {"convex_n", vf_convex}};
    const bm::Json j = bm::suite_report_to_json(rep, config);
    std::cout << j.dump(2) << "\n";
    if (!vf_json.empty()) bm::write_text_file(vf_json, j.dump(2) + "\n");
    return rep.ok() ? 0 : 3;
  }

  if (sc_conj->parsed()) {
    bm::HarnessSettings s;
    s.seed = cj_seed;
    s.curves = cj_curves;
    s.ell_cells = cj_cells;
    s.threads = threads;
    const bm::ConjectureReport rep = bm::conjecture_harness(s);
    bm::Json config{{"subcommand", "conjectures"},
                    {"seed", cj_seed},
                    {"curves", cj_curves},
                    {"cells", cj_cells}};
    const bm::Json j = bm::harness_report_to_json(rep, config);
    std::cout << j.dump(2) << "\n";
    if (!cj_json.empty()) bm::write_text_file(cj_json, j.dump(2) + "\n");
    return rep.ok() ? 0 : 3;
  }

  if (sc_fish->parsed()) {
    bm::CurveSpec fs;
    fs.kind = "fish";
    const bm::PlaneCurve fish = bm::make_named_curve(fs);
    bm::Json summary;
    summary["version"] = bm::kVersion;
    summary["panels"] = bm::Json::array();
    for (double ell : {0.5, 0.9, 1.0, 1.5}) {
      bm::Json config{{"subcommand", "fish-demo"}, {"ell", ell}};
      std::vector<bm::BackTrack> tracks;
      try {
        bm::BackTrackOptions opt;
        opt.steps = 1 << 14;
        tracks = bm::closed_back_tracks(fish, ell, opt);
      } catch (const bm::Error&) {
        // elliptic gap: no closed rear track
      }
      char name[64];
      std::snprintf(name, sizeof name, "fish-ell-%.4g.svg", ell);
      emit_backtrack_svg(fish, tracks, fd_out + "/" + name, config.dump());
      bm::Json panel{{"ell", ell}, {"tracks", tracks.size()}, {"svg", name}};
      if (!tracks.empty()) {
        panel["rho"] = tracks.front().rho;
        panel["mu"] = tracks.front().maslov;
      }
      summary["panels"].push_back(panel);
    }
    bm::write_text_file(fd_out + "/fish-summary.json", summary.dump(2) + "\n");
    std::cout << "wrote 4 panels to " << fd_out << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const bikemono::Error& e) {
    bm::Json diag{{"error", e.what()}, {"version", bm::kVersion}};
    std::cerr << diag.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    bm::Json diag{{"error", e.what()}, {"version", bm::kVersion}};
    std::cerr << diag.dump(2) << "\n";
    return 1;
  }
}
