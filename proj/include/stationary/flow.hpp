#pragma once

// Geodesic flow of g = -lambda (dt - omega)^2 + h written as a first-order
// system in (t, x, v0, vx). The ODE state is packed as [t, x, v0, vx].

#include "stationary/metric.hpp"
#include "stationary/ode.hpp"

#include <limits>
#include <string>

namespace stationary {

struct SpacetimeState {
  double t = 0;
  Vector x;
  double v0 = 0;
  Vector vx;
  double s = 0;  // affine parameter

  Vector velocity() const;  // (v0, vx)
};

Vector pack(const SpacetimeState& state);
SpacetimeState unpack(const Vector& y, double s = 0);

enum class Termination { Horizon, Boundary };

struct ExitInfo {
  Termination reason = Termination::Horizon;
  double crossing_rate = 0;  // <db, xdot> at the stopping point
  bool grazing = false;      // |crossing_rate| < 1e-6 at a boundary stop
};

struct ConservationLog {
  std::vector<std::string> names;  // monitored quantities
  std::vector<double> initial;
  std::vector<double> max_drift;
  int retries = 0;
  std::vector<std::string> warnings;

  /// Largest drift relative to 1 + |initial value|.
  double worst_relative() const;
};

struct FlowOptions {
  double horizon = std::numeric_limits<double>::quiet_NaN();  // NaN: 10 diameters / initial speed
  Tolerances tol{};
  bool stop_at_boundary = true;
  bool monitor = true;
  double drift_threshold = 1e-8;
  int max_retries = 2;
};

struct TrajectoryM {
  DenseTrajectory path;
  int dim = 0;
  ExitInfo exit;
  ConservationLog log;

  SpacetimeState state(double s) const { return unpack(path(s), s); }
  SpacetimeState initial() const { return state(path.begin()); }
  SpacetimeState final() const { return state(path.end()); }
  double duration() const { return path.end() - path.begin(); }
};

double hamiltonian_H(const Spec& spec, const SpacetimeState& state);
double momentum_J(const Spec& spec, const SpacetimeState& state);

/// Time derivative of the state. Fields of the result hold (tdot, xdot,
/// v0dot, vxdot); s is copied.
SpacetimeState geodesic_rhs(const Spec& spec, const SpacetimeState& state);

TrajectoryM integrate_geodesic(const Spec& spec, const SpacetimeState& state0, const FlowOptions& options = {});

namespace detail {

/// Same right-hand side without domain checks, used inside the integrator
/// where stages may step marginally outside N.
void geodesic_rhs_packed(const Spec& spec, const Vector& y, Vector& dy);
double hamiltonian_packed(const Spec& spec, const Vector& y);
double momentum_packed(const Spec& spec, const Vector& y);

/// 10 * (h-diameter of the search ball) / |v|_h.
double default_horizon(const Spec& spec, const Vector& x, const Vector& vx);

ExitInfo classify_exit(const Domain<double>& domain, bool event_hit, const Vector& x, const Vector& xdot);

}  // namespace detail

}  // namespace stationary
