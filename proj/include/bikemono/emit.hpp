#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "bikemono/backtrack.hpp"
#include "bikemono/curve.hpp"
#include "bikemono/development.hpp"
#include "bikemono/scan.hpp"
#include "bikemono/sl2.hpp"
#include "bikemono/transport.hpp"

namespace bikemono {

using Json = nlohmann::json;

/// Shortest exact decimal form (%.17g): reparsing gives the same bits.
std::string fmt_g17(double v);

/// Parses "name" or "name:p1,p2,..." into a CurveSpec (inverse of
/// CurveSpec::shorthand).
CurveSpec parse_curve_spec(const std::string& shorthand);

Json curve_spec_to_json(const CurveSpec& spec);
CurveSpec curve_spec_from_json(const Json& j);

Json sl2_to_json(const Sl2d& g);  // [[m11,m12],[m21,m22]]

Json monodromy_report_to_json(const MonodromyReport& rep, const Json& config);

std::string phase_grid_to_csv(const PhaseGrid& g, const std::string& config_echo);
PhaseGrid phase_grid_from_csv(const std::string& text);

std::string sweep_to_csv(const SweepResult& sw, const std::string& config_echo);
Json sweep_to_json(const SweepResult& sw, const Json& config);

std::string development_to_csv(const Development& dev, const std::string& config_echo);
std::string backtrack_to_csv(const BackTrack& bt, const std::string& config_echo);
std::string transport_to_csv(const TransportResult& tr, const std::string& config_echo);

Json suite_report_to_json(const TheoremSuiteReport& rep, const Json& config);
Json harness_report_to_json(const ConjectureReport& rep, const Json& config);

// --- SVG ---------------------------------------------------------------

struct CurvePlot {
  std::vector<Vec2> points;
  std::string color = "#1f77b4";
  double width = 1.5;
};

struct MarkerSet {
  std::vector<Vec2> points;
  std::string color = "#000000";
  double radius = 3.0;
};

/// Heat map with the fixed three-class palette (elliptic blue, parabolic
/// pale, hyperbolic red).
std::string svg_phase_grid(const PhaseGrid& g, const std::string& title,
                           const std::string& config_echo);

std::string svg_curves(const std::vector<CurvePlot>& plots,
                       const std::vector<MarkerSet>& markers,
                       const std::string& title, const std::string& config_echo);

/// Development in the Poincare disk, unrolled over `window` periods.
std::string svg_development_disk(const Development& dev, int window,
                                 const std::string& config_echo);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace bikemono
