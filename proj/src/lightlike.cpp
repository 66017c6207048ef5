#include "stationary/lightlike.hpp"

#include <cmath>

namespace stationary {

void require_unit_lambda(const Spec& spec) {
  auto pts = lattice_samples(spec.domain, 10);
  const auto bdry = boundary_samples(spec.domain, 200);
  pts.insert(pts.end(), bdry.begin(), bdry.end());
  for (const auto& x : pts)
    if (std::abs(spec.lambda(x) - 1.0) > 1e-12) throw Error(ErrorCode::LambdaNotOne, "lightlike mode needs lambda == 1");
}

MPSystem magnetic_system(const Spec& spec) { return reduce(spec, -1.0, 0.0); }

SpacetimeState null_normalize(const Spec& spec, const SpacetimeState& state) {
  require_unit_lambda(spec);
  const double H = hamiltonian_H(spec, state);
  const double scale = state.velocity().squaredNorm();
  if (!(scale > 0) || std::abs(H) > 1e-10 * (1.0 + scale)) throw Error(ErrorCode::NotNull, "state is not a nonzero null vector");
  const double J = momentum_J(spec, state);
  if (J == 0) throw Error(ErrorCode::NotNull, "null vector with zero momentum");
  SpacetimeState out = state;
  const double a = -1.0 / J;
  out.v0 *= a;
  out.vx *= a;
  return out;
}

TrajectoryTN null_project(const Spec& spec, const TrajectoryM& traj) { return project(spec, traj, -1.0); }

NullConvexityReport null_convexity(const Spec& spec, const BoundarySampling& sampling) {
  require_unit_lambda(spec);
  NullConvexityReport rep;
  rep.bridge = lorentzian_convexity_bridge(spec, -1.0, 0.0, sampling);
  auto pts = lattice_samples(spec.domain, 10);
  const auto bdry = boundary_samples(spec.domain, sampling.points);
  pts.insert(pts.end(), bdry.begin(), bdry.end());
  for (const auto& x : pts) {
    const auto gamma = christoffel_h(spec.h, x);
    const Vector w = spec.omega(x);
    Matrix cov = spec.omega.jac(x);
    for (Eigen::Index i = 0; i < cov.rows(); ++i)
      for (Eigen::Index j = 0; j < cov.cols(); ++j)
        for (Eigen::Index k = 0; k < cov.rows(); ++k) cov(i, j) -= gamma(k, i, j) * w(k);
    rep.max_symmetric_derivative = std::max(rep.max_symmetric_derivative, (0.5 * (cov + cov.transpose())).cwiseAbs().maxCoeff());
  }
  return rep;
}

}  // namespace stationary
