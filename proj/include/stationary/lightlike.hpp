#pragma once

// Null geodesics of specs with lambda = 1, normalized to momentum -1, and
// their unit-speed magnetic shadows in (N, h, -d omega).

#include "stationary/simplicity.hpp"

namespace stationary {

/// Throws LambdaNotOne unless lambda == 1 (to 1e-12) on the sample grid.
void require_unit_lambda(const Spec& spec);

/// reduce(spec, -1, 0): Lorentz force of -d omega, U = -1/2, energy 0.
MPSystem magnetic_system(const Spec& spec);

/// Rescales a null vector so that J = -1. Throws NotNull.
SpacetimeState null_normalize(const Spec& spec, const SpacetimeState& state);

/// Spatial part of a normalized null geodesic.
TrajectoryTN null_project(const Spec& spec, const TrajectoryM& traj);

struct NullConvexityReport {
  BridgeReport bridge;
  double max_symmetric_derivative = 0;  // max |d^s omega| over samples, reported only
};

/// Bridge between Pi(v, v) for v = (1 + <omega, vx>, vx) and strict
/// magnetic convexity of (N, h, -d omega) at unit speed.
NullConvexityReport null_convexity(const Spec& spec, const BoundarySampling& sampling = {});

}  // namespace stationary
