#pragma once

// Magnetic-potential (MP) systems (N, h, Omega = d alpha, U) and the
// reduction of the stationary geodesic flow at fixed momentum rho.

#include "stationary/flow.hpp"

#include <memory>
#include <optional>

namespace stationary {

struct ReducedState {
  Vector x;
  Vector vx;
};

struct MPSystem {
  std::string name;
  Domain<double> domain;
  MetricField<double> h;
  CovectorField<double> alpha;  // magnetic potential, Omega = d alpha
  ScalarField<double> U;
  double k = 0;  // energy level of interest

  // Set when the system comes from `reduce`; needed to lift back to M.
  std::optional<double> rho;
  std::shared_ptr<const Spec> base;

  int dim() const { return domain.dim(); }

  /// Omega_ij = d_i alpha_j - d_j alpha_i.
  Matrix Omega(const Vector& x) const { return alpha.exterior(x); }
  /// Lorentz force: (Y u, v)_h = Omega(u, v).
  Matrix Y(const Vector& x) const;
  double energy(const ReducedState& s) const;
};

/// The reduced system at momentum rho and mass m: alpha = rho * omega,
/// U = rho^2 / (-2 lambda), k = -m^2 / 2.
MPSystem reduce(const Spec& spec, double rho, double m = 1.0);

/// Acceleration of an MP geodesic: -Gamma(v, v) + Y v - grad U.
Vector mp_acceleration(const MPSystem& sys, const Vector& x, const Vector& v);
ReducedState mp_rhs(const MPSystem& sys, const ReducedState& state);

struct TrajectoryTN {
  DenseTrajectory path;  // packed [x, vx]
  int dim = 0;
  ExitInfo exit;
  ConservationLog log;

  ReducedState state(double s) const;
  double duration() const { return path.end() - path.begin(); }
};

TrajectoryTN integrate_mp(const MPSystem& sys, const ReducedState& state0, const FlowOptions& options = {});

/// (x, vx) part of a spacetime geodesic. Throws MomentumMismatch when J
/// strays from rho by more than 1e-8 (1 + |rho|) at an accepted step.
TrajectoryTN project(const Spec& spec, const TrajectoryM& traj, double rho);

/// Spacetime geodesic over an MP trajectory of a reduced system, with
/// t(s) = t0 + int (-rho / lambda + <omega, xdot>).
TrajectoryM lift(const MPSystem& sys, const TrajectoryTN& traj, double t0);

struct MassEnergyCheck {
  bool ok = false;
  double residual = 0;
};

/// |E(x, v) + m^2 / 2| <= 1e-9.
MassEnergyCheck mass_energy_check(const MPSystem& sys, const ReducedState& state, double m);

/// Scales the magnetic potential by c and the potential by c^2, the effect
/// of changing the momentum from 1 to c.
MPSystem scale_momentum(const MPSystem& unit, double c);

/// zeta(tau) = sigma(rho tau) for a trajectory sigma of the unit-momentum
/// system at energy -m^2 / (2 rho^2). For rho < 0 the new parameter runs
/// over a negative interval ending at 0.
TrajectoryTN rescale_momentum(const MPSystem& unit, const TrajectoryTN& traj, double rho, double m);

namespace detail {
void mp_rhs_packed(const MPSystem& sys, const Vector& y, Vector& dy);
double mp_energy_packed(const MPSystem& sys, const Vector& y);
}  // namespace detail

}  // namespace stationary
