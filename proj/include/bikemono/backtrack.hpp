#pragma once

#include <string>
#include <vector>

#include "bikemono/curve.hpp"
#include "bikemono/sl2.hpp"
#include "bikemono/transport.hpp"

namespace bikemono {

struct Cusp {
  double t;
  int sign;         // +1 when traversed in the co-orienting direction
  bool degenerate;  // tangential zero of the rear speed
};

/// Rear track gamma(t) = Gamma(t) + ell (cos theta, sin theta) produced by a
/// theta flow, with its closure, cusp and index data.
struct BackTrack {
  std::vector<double> t;
  std::vector<Vec2> gamma;
  std::vector<double> theta;  // unwrapped
  std::vector<double> s;      // rear speed Gamma' . r
  double ell = 1;
  double theta0 = 0;
  Stability branch = Stability::Neutral;

  double closure_pos_gap = 0;
  double closure_angle_gap = 0;  // distance of theta(L)-theta(0) to 2 pi Z
  bool closes = false;

  std::vector<Cusp> cusps;
  int rho = 0;
  double rho_residual = 0;
  int maslov = 0;
  bool maslov_reliable = true;
  bool cusp_sign_mismatch = false;  // per-cusp signs vs winding index
  double noskid_residual = 0;       // sup |ell theta' - (X' sin - Y' cos)|
};

struct ThetaFlowOptions {
  int steps = 1 << 14;
  bool backward = false;  // integrate from t1 down; stable for repellers
};

/// RK4 integration of ell theta' = X' sin theta - Y' cos theta along the
/// curve's own parametrization. Returns steps+1 unwrapped samples on the
/// uniform grid; for backward integration theta0 is the value at t1.
std::vector<double> theta_flow(const PlaneCurve& c, double ell, double theta0,
                               const ThetaFlowOptions& opt = {});

/// Assembles the full BackTrack (gamma, s, cusps, rho, maslov) for a given
/// initial frame angle.
BackTrack build_back_track(const PlaneCurve& c, double ell, double theta0,
                           Stability branch, bool integrate_backward,
                           int steps = 1 << 14);

struct BackTrackOptions {
  int steps = 1 << 14;
  double require_margin = 0;  // refuse monodromies closer than this to |tr|=2
  MonodromySettings monodromy{};
};

/// Closed rear tracks of a closed front: two for hyperbolic monodromy
/// (attracting first, integrated forward; repelling integrated backward),
/// one for parabolic, none for elliptic.
std::vector<BackTrack> closed_back_tracks(const PlaneCurve& c, double ell,
                                          const BackTrackOptions& opt = {});

/// (theta(L) - theta(0)) / 2 pi rounded; throws when the pre-round residual
/// exceeds 1e-3.
int rotation_number_rear(const BackTrack& bt);

/// rho(front) - rho(rear) - maslov/2; zero on every consistent pair.
int rot_identity_residual(const PlaneCurve& front, const BackTrack& bt);

struct LengthBound {
  double length;  // front length L
  double rhs;     // 2 pi ell |rho|
  bool ok;        // L >= rhs - 1e-8
  bool equality;  // |L - rhs| < 1e-6 and the front is a circle of radius ell
};

LengthBound length_bound_check(const PlaneCurve& front, const BackTrack& bt,
                               double ell);

}  // namespace bikemono
