#pragma once

// Boundary data of the stationary flow: exit times, projections onto the
// boundary cylinder, the momentum-mass scattering relation, its MP
// counterpart, and the boundary action.

#include "stationary/simplicity.hpp"

namespace stationary {

/// Tangent data at the boundary. On the Lorentzian side (t, vt) carry the
/// time coordinate and v_t' = lambda (v'^0 - <omega, vx'>); on the MP side
/// they are unused.
struct BoundaryTangent {
  Vector x;
  double t = 0;
  double vt = std::numeric_limits<double>::quiet_NaN();
  Vector vx;  // h-orthogonal to nu_x
};

/// Entry at time t_in, exit at t_out after affine time T. time_shift is
/// t_in - t_out, the combination entering action = rho * time_shift - m^2 T.
struct ScatteringRecord {
  BoundaryTangent entry;
  BoundaryTangent exit;
  double T = 0;
  double time_shift = 0;
  double action = 0;
  double rho = 0;
  double m = 0;
  bool grazing = false;

  double action_from_parts() const { return rho * time_shift - m * m * T; }
};

double exit_time(const TrajectoryM& traj);
double exit_time(const TrajectoryTN& traj);

/// Tangential part of vx at a boundary point: vx - (vx, nu)_h nu.
Vector project_to_boundary_N(const MetricField<double>& h, const Domain<double>& domain, const Vector& x, const Vector& vx);

/// v' = v - (v, nu)_g nu with nu = (<omega, nu_x>, nu_x). v is (v0, vx).
BoundaryTangent project_to_boundary_M(const Spec& spec, const Vector& x, double t, const Vector& v);

/// Inward vector vx' + c nu_in with |.|_h^2 = speed2 and c > 0.
Vector reconstruct_inward(const MetricField<double>& h, const Domain<double>& domain, const Vector& x, const Vector& vx_tan,
                          double speed2);

ScatteringRecord scattering_rho_m(const Spec& spec, double rho, double m, const BoundaryTangent& entry,
                                  const FlowOptions& options = {});

struct MPScattering {
  BoundaryTangent entry;
  BoundaryTangent exit;
  double tau = 0;
  double action = 0;     // time-free action along the trajectory
  double lift_time = 0;  // int (-rho/lambda + <omega, xdot>), NaN without a base spec
  bool grazing = false;
};

MPScattering scattering_mp(const MPSystem& sys, const BoundaryTangent& entry, const FlowOptions& options = {});

/// Time-free action integrand 1/2 |v|^2 + k - alpha(v) - U along an MP
/// trajectory.
double time_free_action(const MPSystem& sys, const TrajectoryTN& traj, double k);

struct BoundaryAction {
  double value = 0;     // time-free action of the connecting geodesic
  double via_lift = 0;  // rho (t - s) - m^2 T from its lift
  double T = 0;
  double time_shift = 0;  // t - s of the lift
  ShootingSolution solution;
  bool not_simple = false;
};

/// Action of the energy -m^2/2 MP geodesic joining x to y, found by shooting.
BoundaryAction action_boundary(const MPSystem& sys, double m, const Vector& x, const Vector& y,
                               const ShootingOptions& options = {.starts = 1});

/// Rebuilds the momentum-mass record from MP scattering data and the action,
/// without integrating on M.
ScatteringRecord reconstruct_S_rho_m(const MPSystem& sys, double m, const MPScattering& mp, double action,
                                     const BoundaryTangent& entry);

}  // namespace stationary
