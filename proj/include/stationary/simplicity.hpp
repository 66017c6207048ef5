#pragma once

// Admissibility and simplicity diagnostics: the momentum band, hyperbolic
// angles, strict MP-convexity of the boundary, and shooting for the
// MP-exponential map.

#include "stationary/mp.hpp"

#include <string>

namespace stationary {

struct AdmissibilityReport {
  double rho = std::numeric_limits<double>::quiet_NaN();
  double m = 1;
  double lambda_min = 0;  // A
  double lambda_max = 0;  // B
  bool band_ok = false;
  double margin = 0;  // rho^2 / m^2 - B

  /// Smallest |rho| allowed, m * sqrt(B).
  double threshold() const;
  std::string band() const;
  AdmissibilityReport with_rho(double rho) const;
};

/// Sampled extrema of lambda and the admissible momentum band for mass m.
AdmissibilityReport admissible_band(const Spec& spec, double m, const ValidationOptions& sampling = {});

struct HyperbolicAngle {
  double phi = 0;
  bool same_timecone = true;  // rho < 0: v and d/dt in the same cone
};

HyperbolicAngle hyperbolic_angle(const Spec& spec, const Vector& x, double rho, double m);

struct BoundarySampling {
  int points = 200;
  int directions = 16;  // tangent directions per point (2 in the plane)
  double angle_offset = 0.0;
};

/// Unit tangent directions (h-orthonormal basis combinations) at x.
std::vector<Vector> tangent_directions(const Matrix& h, const Vector& normal, int count);

/// Pi(xi, xi) = (nabla_xi nu, xi)_h with nu the outward h-unit normal.
double second_fundamental_form(const MetricField<double>& h, const Domain<double>& domain, const Vector& x, const Vector& xi);

struct ConvexitySample {
  Vector x;
  Vector xi;
  double pi = 0;         // Pi(xi, xi)
  double force = 0;      // (Y xi, nu_in)_h
  double potential = 0;  // dU(nu_in)
  double margin = 0;     // pi - force + potential
};

struct ConvexityReport {
  double min_margin = std::numeric_limits<double>::infinity();
  bool strictly_convex = false;
  int skipped = 0;  // boundary points with an empty energy sphere
  std::vector<ConvexitySample> samples;
};

/// Strict MP-convexity margin at energy sys.k over boundary samples.
ConvexityReport mp_convexity(const MPSystem& sys, const BoundarySampling& sampling = {});

/// (g-nabla_v nu, v)_g for the spacetime normal nu = (<omega, nu_x>, nu_x).
double lorentzian_second_fundamental(const Spec& spec, const Vector& x, const Vector& v);

struct BridgeRow {
  Vector x;
  Vector v;  // (v0, vx)
  double lorentzian = 0;
  double mp = 0;
};

struct BridgeReport {
  bool applicable = false;
  double max_omega_tangent = 0;    // max |<omega, vx>| over samples
  double max_force_potential = 0;  // max |<d^s rho omega, nu_in (x) vx> - dU(nu_in)|, reported only
  double max_abs_diff = 0;
  bool signs_agree = true;
  double min_lorentzian = std::numeric_limits<double>::infinity();
  double min_mp = std::numeric_limits<double>::infinity();
  std::vector<BridgeRow> rows;
};

/// Compares Pi_M(v, v) for v = (-rho/lambda + <omega, vx>, vx) with the MP
/// convexity margin of reduce(spec, rho, m). Applicable when <omega, vx>
/// vanishes on the sampled boundary directions.
BridgeReport lorentzian_convexity_bridge(const Spec& spec, double rho, double m, const BoundarySampling& sampling = {});

/// exp_x^k(s v): endpoint of the MP geodesic with initial direction v (any
/// length; rescaled to the energy sphere of sys.k) after time s.
Vector mp_exponential(const MPSystem& sys, const Vector& x, const Vector& v, double s);

struct ShootingOptions {
  int starts = 16;
  int max_iterations = 40;
  double tolerance = 1e-9;
  double max_length = 10.0;  // in units of the domain radius; longer iterates are abandoned
  Tolerances tol{1e-12, 1e-12};
};

struct ShootingSolution {
  Vector p;          // exp argument s * v, with v on the energy sphere measured in h-length s * |v|
  Vector direction;  // h-unit initial direction
  double s = 0;      // MP time to reach y
  double residual = 0;
  double condition = 1;  // condition number of d exp at p
};

struct ShootingReport {
  std::vector<ShootingSolution> converged;  // one per successful start, in start order
  std::vector<ShootingSolution> solutions;  // distinct solutions
  int discarded_left_domain = 0;
  bool not_simple = false;

  const ShootingSolution& best() const;
};

/// Newton shooting on p -> exp_x^k(p) - y from several starts. Throws
/// ShootingFailed if no start converges inside N.
ShootingReport shoot_connect(const MPSystem& sys, const Vector& x, const Vector& y, double k,
                             const ShootingOptions& options = {});

namespace detail {
/// MP trajectory from x with initial velocity along p on the energy sphere
/// of k, run for time |p|_h / speed, without boundary stop.
TrajectoryTN exp_trajectory(const MPSystem& sys, const Vector& x, const Vector& p, double k, const Tolerances& tol);
double energy_speed(const MPSystem& sys, const Vector& x, double k);
}  // namespace detail

}  // namespace stationary
