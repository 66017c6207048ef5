#include "stationary/flow.hpp"

#include <cmath>
#include <sstream>

namespace stationary {

Vector SpacetimeState::velocity() const {
  Vector v(vx.size() + 1);
  v << v0, vx;
  return v;
}

Vector pack(const SpacetimeState& state) {
  const auto n = state.x.size();
  Vector y(2 * n + 2);
  y << state.t, state.x, state.v0, state.vx;
  return y;
}

SpacetimeState unpack(const Vector& y, double s) {
  const auto n = (y.size() - 2) / 2;
  return {y(0), y.segment(1, n), y(n + 1), y.segment(n + 2, n), s};
}

double ConservationLog::worst_relative() const {
  double worst = 0;
  for (std::size_t i = 0; i < max_drift.size(); ++i) worst = std::max(worst, max_drift[i] / (1.0 + std::abs(initial[i])));
  return worst;
}

namespace detail {

double hamiltonian_packed(const Spec& spec, const Vector& y) {
  const SpacetimeState st = unpack(y);
  const double q = st.v0 - spec.omega(st.x).dot(st.vx);
  return 0.5 * (-spec.lambda(st.x) * q * q + st.vx.dot(spec.h(st.x) * st.vx));
}

double momentum_packed(const Spec& spec, const Vector& y) {
  const SpacetimeState st = unpack(y);
  return -spec.lambda(st.x) * (st.v0 - spec.omega(st.x).dot(st.vx));
}

void geodesic_rhs_packed(const Spec& spec, const Vector& y, Vector& dy) {
  const auto n = (y.size() - 2) / 2;
  const Vector x = y.segment(1, n);
  const double v0 = y(n + 1);
  const Vector v = y.segment(n + 2, n);
  const LocalFields<double> f = local_fields(spec, x);
  const Christoffel<double> gh = christoffel_from(f.h_inv, f.dh);

  const double q = v0 - f.omega.dot(v);
  const Matrix curl = f.domega - f.domega.transpose();  // (k, i) = d_k w_i - d_i w_k
  // B^l = -Gamma^l_ij v^i v^j
  const Vector B = -gh.contract(v, v);
  const Vector vxdot = B - 0.5 * q * q * (f.h_inv * f.dlambda) + f.lambda * q * (f.h_inv * (curl * v));

  const Vector w_up = f.h_inv * f.omega;
  const double v0dot = -q * f.dlambda.dot(v) / f.lambda + v.dot(f.domega * v) - f.omega.dot(gh.contract(v, v)) -
                       0.5 * q * q * w_up.dot(f.dlambda) + f.lambda * q * w_up.dot(curl * v);

  dy.resize(y.size());
  dy(0) = v0;
  dy.segment(1, n) = v;
  dy(n + 1) = v0dot;
  dy.segment(n + 2, n) = vxdot;
}

double default_horizon(const Spec& spec, const Vector& x, const Vector& vx) {
  const auto& d = spec.domain;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(spec.h(d.center), Eigen::EigenvaluesOnly);
  const double diameter = 2.0 * d.radius * std::sqrt(eig.eigenvalues().maxCoeff());
  const double speed = std::sqrt(vx.dot(spec.h(x) * vx));
  return speed > 0 ? 10.0 * diameter / speed : 10.0 * diameter;
}

ExitInfo classify_exit(const Domain<double>& domain, bool event_hit, const Vector& x, const Vector& xdot) {
  ExitInfo info;
  info.reason = event_hit ? Termination::Boundary : Termination::Horizon;
  info.crossing_rate = domain.b.grad(x).dot(xdot);
  info.grazing = event_hit && std::abs(info.crossing_rate) < 1e-6;
  return info;
}

}  // namespace detail

double hamiltonian_H(const Spec& spec, const SpacetimeState& state) {
  const auto g = assemble_g(spec, state.x);
  const Vector v = state.velocity();
  return 0.5 * v.dot(g.g * v);
}

double momentum_J(const Spec& spec, const SpacetimeState& state) {
  require_in_domain(spec.domain, state.x);
  return -spec.lambda(state.x) * (state.v0 - spec.omega(state.x).dot(state.vx));
}

SpacetimeState geodesic_rhs(const Spec& spec, const SpacetimeState& state) {
  require_in_domain(spec.domain, state.x);
  Vector dy;
  detail::geodesic_rhs_packed(spec, pack(state), dy);
  SpacetimeState out = unpack(dy, state.s);
  return out;
}

TrajectoryM integrate_geodesic(const Spec& spec, const SpacetimeState& state0, const FlowOptions& options) {
  require_in_domain(spec.domain, state0.x);
  const double horizon =
      std::isnan(options.horizon) ? detail::default_horizon(spec, state0.x, state0.vx) : options.horizon;
  // t enters the right-hand side nowhere; integrating t - t0 keeps step
  // control independent of the initial time.
  Vector y0 = pack(state0);
  y0(0) = 0.0;
  const auto n = state0.x.size();

  auto rhs = [&spec](const Vector& y, Vector& dy) { detail::geodesic_rhs_packed(spec, y, dy); };
  EventFn event;
  if (options.stop_at_boundary) event = [&spec, n](const Vector& y) { return spec.domain.b(y.segment(1, n)); };

  const double J0 = detail::momentum_packed(spec, y0);
  const double H0 = detail::hamiltonian_packed(spec, y0);

  Tolerances tol = options.tol;
  TrajectoryM traj;
  traj.dim = static_cast<int>(n);
  for (int attempt = 0;; ++attempt) {
    OdeResult res = integrate_ode(rhs, y0, state0.s, state0.s + horizon, tol, event);
    traj.path = std::move(res.path);
    traj.path.shift_component(0, state0.t);
    const Vector yend = traj.path.back();
    traj.exit = detail::classify_exit(spec.domain, res.event_hit, yend.segment(1, n), yend.segment(n + 2, n));

    traj.log.names = {"J", "H"};
    traj.log.initial = {J0, H0};
    traj.log.max_drift = {0.0, 0.0};
    if (!options.monitor) break;
    for (double s : traj.path.knots()) {
      const Vector y = traj.path(s);
      traj.log.max_drift[0] = std::max(traj.log.max_drift[0], std::abs(detail::momentum_packed(spec, y) - J0));
      traj.log.max_drift[1] = std::max(traj.log.max_drift[1], std::abs(detail::hamiltonian_packed(spec, y) - H0));
    }
    if (traj.log.worst_relative() <= options.drift_threshold) break;
    if (attempt >= options.max_retries) {
      std::ostringstream msg;
      msg << "ConservationWarning: relative drift " << traj.log.worst_relative() << " after " << attempt << " retries";
      traj.log.warnings.push_back(msg.str());
      break;
    }
    std::ostringstream msg;
    msg << "ConservationWarning: relative drift " << traj.log.worst_relative() << ", retrying with tighter tolerances";
    traj.log.warnings.push_back(msg.str());
    ++traj.log.retries;
    tol.rtol = std::max(tol.rtol * 1e-2, 1e-14);
    tol.atol = std::max(tol.atol * 1e-2, 1e-14);
  }
  return traj;
}

}  // namespace stationary
