#pragma once

// Gauge transformations (f, phi, mu) acting on stationary specs and on MP
// systems, and the numerical check that gauge-related specs scatter alike.

#include "stationary/expr.hpp"
#include "stationary/scattering.hpp"

#include <string>

namespace stationary {

struct GaugeTransform {
  std::function<Vector(const Vector&)> f;
  std::function<Matrix(const Vector&)> Df;  // (i, j) = d_j f_i
  ScalarField<double> phi;                  // vanishes on the boundary
  ScalarField<double> mu;                   // positive, 1 on the boundary

  static GaugeTransform identity(int dim);
};

/// Coefficients of the built-in boundary-fixing family on a domain with
/// defining function b:
///   f(x)  = x + epsilon * b(x)^2 * (shift + rotation * x)
///   phi   = b(x) * q(x)
///   mu    = exp(mu_scale * b(x))
struct GaugeParams {
  double epsilon = 0;
  Vector shift;     // empty: zero
  Matrix rotation;  // empty: zero
  Expr<double> q;
  double mu_scale = 0;
};

GaugeTransform boundary_fixing_gauge(const Domain<double>& domain, const GaugeParams& params);

/// Samples the gauge invariants; throws InvalidGauge.
void validate_gauge(const GaugeTransform& gauge, const Domain<double>& domain, int boundary_points = 200);

/// h' = f*h / mu, omega' = f*omega + d(phi / rho),
/// 1/lambda' = mu (1 / f*lambda - m^2/rho^2) + m^2/rho^2.
/// Derivatives of the result are finite differences.
Spec apply_gauge_ssm(const Spec& spec, const GaugeTransform& gauge, double rho, double m);

/// h' = f*h / mu, alpha' = f*alpha + d phi, U' = mu (f*U - k) + k.
MPSystem apply_gauge_mp(const MPSystem& sys, const GaugeTransform& gauge, double k);

/// The gauge equal to applying `first` and then `second`.
GaugeTransform compose(const GaugeTransform& first, const GaugeTransform& second);

struct BoundaryTraceCheck {
  double h = 0;
  double omega_tangential = 0;
  double lambda = 0;
  double worst() const { return std::max({h, omega_tangential, lambda}); }
};

BoundaryTraceCheck compare_boundary_traces(const Spec& a, const Spec& b, int points = 200);

struct InvarianceReport {
  int requested = 0;
  int compared = 0;
  int skipped = 0;     // both specs rejected the entry with the same error
  int mismatched = 0;  // only one spec produced a record
  double exit_point = 0;
  double exit_tangent = 0;
  double T = 0;
  double time_shift = 0;
  double action = 0;
  bool pass = false;

  double max_deviation() const { return std::max({exit_point, exit_tangent, T, time_shift, action}); }
};

/// Admissible boundary entries for (rho, m): evenly spaced points with
/// seeded tangential fractions in [-max_fraction, max_fraction].
std::vector<BoundaryTangent> sample_entries(const Spec& spec, double rho, double m, int count, unsigned seed,
                                            double max_fraction = 0.7);

enum class EntryOutcome { Compared, BothFailed, OneFailed };

struct EntryDeviation {
  EntryOutcome outcome = EntryOutcome::Compared;
  std::string error_a, error_b;  // empty when the record exists
  double exit_point = 0;
  double exit_tangent = 0;
  double T = 0;
  double time_shift = 0;
  double action = 0;

  double max() const { return std::max({exit_point, exit_tangent, T, time_shift, action}); }
};

/// Componentwise record differences between two specs, one per entry. Both
/// failing with the same code counts as BothFailed.
std::vector<EntryDeviation> scattering_deviations(const Spec& a, const Spec& b, double rho, double m,
                                                  const std::vector<BoundaryTangent>& entries,
                                                  const FlowOptions& options = {});

/// PASS iff every component deviates by at most `threshold`.
InvarianceReport verify_scattering_invariance(const Spec& a, const Spec& b, double rho, double m, int n_samples,
                                              unsigned seed = 1, double threshold = 1e-5);

/// Psi*g for Psi(t, x) = (t + phi_hat(x), f(x)) with phi_hat = -phi / rho,
/// read back as (h, omega, lambda). Throws ConventionMismatch unless it
/// agrees with apply_gauge_ssm to 1e-10 at sampled points.
Spec psi_pullback(const Spec& spec, const GaugeTransform& gauge, double rho);

}  // namespace stationary
