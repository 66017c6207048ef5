#include "stationary/scattering.hpp"

#include <cmath>
#include <sstream>

namespace stationary {

namespace {

double checked_exit(const ExitInfo& exit, double duration) {
  if (exit.reason != Termination::Boundary) throw Error(ErrorCode::NoExit, "horizon reached before leaving N");
  if (exit.grazing) throw Error(ErrorCode::GrazingExit, "tangential crossing of the boundary");
  return duration;
}

void require_on_boundary(const Domain<double>& d, const Vector& x) {
  if (!on_boundary(d, x)) {
    std::ostringstream msg;
    msg << "b(x) = " << d.b(x) << " is not within the boundary tolerance";
    throw Error(ErrorCode::NotOnBoundary, msg.str());
  }
}

}  // namespace

double exit_time(const TrajectoryM& traj) { return checked_exit(traj.exit, traj.duration()); }
double exit_time(const TrajectoryTN& traj) { return checked_exit(traj.exit, traj.duration()); }

Vector project_to_boundary_N(const MetricField<double>& h, const Domain<double>& domain, const Vector& x, const Vector& vx) {
  const Vector nu = outward_normal(h, domain, x);
  return vx - vx.dot(h(x) * nu) * nu;
}

BoundaryTangent project_to_boundary_M(const Spec& spec, const Vector& x, double t, const Vector& v) {
  require_on_boundary(spec.domain, x);
  const auto n = x.size();
  const Vector nu = outward_normal(spec.h, spec.domain, x);
  const Vector w = spec.omega(x);
  const Vector vx = v.tail(n);
  // (v, nu)_g = (vx, nu_x)_h because nu has vanishing momentum
  const double c = vx.dot(spec.h(x) * nu);
  BoundaryTangent out;
  out.x = x;
  out.t = t;
  out.vx = vx - c * nu;
  const double v0p = v(0) - c * w.dot(nu);
  out.vt = spec.lambda(x) * (v0p - w.dot(out.vx));
  return out;
}

Vector reconstruct_inward(const MetricField<double>& h, const Domain<double>& domain, const Vector& x, const Vector& vx_tan,
                          double speed2) {
  const Vector nu = outward_normal(h, domain, x);
  const Matrix hx = h(x);
  const Vector tan = vx_tan - vx_tan.dot(hx * nu) * nu;
  const double c2 = speed2 - tan.dot(hx * tan);
  if (!(c2 > 0)) {
    std::ostringstream msg;
    msg << "normal coefficient^2 = " << c2 << " has no positive root";
    throw Error(ErrorCode::NoInwardSolution, msg.str());
  }
  return tan - std::sqrt(c2) * nu;
}

ScatteringRecord scattering_rho_m(const Spec& spec, double rho, double m, const BoundaryTangent& entry,
                                  const FlowOptions& options) {
  require_on_boundary(spec.domain, entry.x);
  if (std::isfinite(entry.vt) && std::abs(entry.vt + rho) > 1e-8 * (1.0 + std::abs(rho))) {
    throw Error(ErrorCode::MomentumMismatch, "entry v_t' differs from -rho");
  }
  const Vector& x = entry.x;
  const double lam = spec.lambda(x);
  const Vector vx = reconstruct_inward(spec.h, spec.domain, x, entry.vx, rho * rho / lam - m * m);
  SpacetimeState s0{entry.t, x, -rho / lam + spec.omega(x).dot(vx), vx, 0.0};

  FlowOptions opts = options;
  opts.stop_at_boundary = true;
  const TrajectoryM traj = integrate_geodesic(spec, s0, opts);
  const double T = exit_time(traj);
  const SpacetimeState fin = traj.final();

  ScatteringRecord rec;
  rec.entry = project_to_boundary_M(spec, x, entry.t, s0.velocity());
  rec.exit = project_to_boundary_M(spec, fin.x, fin.t, fin.velocity());
  rec.T = T;
  rec.time_shift = entry.t - fin.t;
  rec.rho = rho;
  rec.m = m;
  rec.action = rec.action_from_parts();
  rec.grazing = traj.exit.grazing;
  return rec;
}

double time_free_action(const MPSystem& sys, const TrajectoryTN& traj, double k) {
  const auto n = traj.dim;
  return integrate_along(traj.path, [&](double, const Vector& y) {
    const Vector x = y.head(n);
    const Vector v = y.tail(n);
    return 0.5 * v.dot(sys.h(x) * v) + k - sys.alpha(x).dot(v) - sys.U(x);
  });
}

namespace {

double lift_increment(const MPSystem& sys, const TrajectoryTN& traj) {
  if (!sys.base || !sys.rho) return std::numeric_limits<double>::quiet_NaN();
  const Spec& spec = *sys.base;
  const double rho = *sys.rho;
  const auto n = traj.dim;
  return integrate_along(traj.path, [&](double, const Vector& y) {
    const Vector x = y.head(n);
    return -rho / spec.lambda(x) + spec.omega(x).dot(y.tail(n));
  });
}

}  // namespace

MPScattering scattering_mp(const MPSystem& sys, const BoundaryTangent& entry, const FlowOptions& options) {
  require_on_boundary(sys.domain, entry.x);
  const Vector& x = entry.x;
  const Vector vx = reconstruct_inward(sys.h, sys.domain, x, entry.vx, 2.0 * (sys.k - sys.U(x)));
  FlowOptions opts = options;
  opts.stop_at_boundary = true;
  const TrajectoryTN traj = integrate_mp(sys, {x, vx}, opts);

  MPScattering out;
  out.tau = exit_time(traj);
  const ReducedState fin = traj.state(traj.path.end());
  out.entry.x = x;
  out.entry.vx = project_to_boundary_N(sys.h, sys.domain, x, vx);
  out.exit.x = fin.x;
  out.exit.vx = project_to_boundary_N(sys.h, sys.domain, fin.x, fin.vx);
  out.action = time_free_action(sys, traj, sys.k);
  out.lift_time = lift_increment(sys, traj);
  out.grazing = traj.exit.grazing;
  return out;
}

BoundaryAction action_boundary(const MPSystem& sys, double m, const Vector& x, const Vector& y, const ShootingOptions& options) {
  BoundaryAction out;
  const double k = -0.5 * m * m;
  if ((x - y).norm() <= 1e-14) return out;  // defined limit: T -> 0, action -> 0

  ShootingReport rep;
  try {
    rep = shoot_connect(sys, x, y, k, options);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ShootingFailed || options.starts >= 16) throw;
    ShootingOptions wider = options;
    wider.starts = 16;
    rep = shoot_connect(sys, x, y, k, wider);
  }
  out.solution = rep.best();
  out.not_simple = rep.not_simple;
  const TrajectoryTN traj = detail::exp_trajectory(sys, x, out.solution.p, k, options.tol);
  out.T = traj.duration();
  out.value = time_free_action(sys, traj, k);
  const double dt = lift_increment(sys, traj);
  out.time_shift = -dt;
  out.via_lift = sys.rho ? *sys.rho * out.time_shift - m * m * out.T : std::numeric_limits<double>::quiet_NaN();
  return out;
}

ScatteringRecord reconstruct_S_rho_m(const MPSystem& sys, double m, const MPScattering& mp, double action,
                                     const BoundaryTangent& entry) {
  if (!sys.base || !sys.rho) throw Error(ErrorCode::InvalidSpec, "reconstruction needs a system produced by reduce()");
  const Spec& spec = *sys.base;
  const double rho = *sys.rho;
  ScatteringRecord rec;
  rec.rho = rho;
  rec.m = m;
  rec.T = mp.tau;
  rec.action = action;
  rec.time_shift = (action + m * m * mp.tau) / rho;
  rec.entry.x = entry.x;
  rec.entry.t = entry.t;
  rec.entry.vx = project_to_boundary_N(spec.h, spec.domain, entry.x, entry.vx);
  rec.entry.vt = -rho;
  rec.exit.x = mp.exit.x;
  rec.exit.t = entry.t - rec.time_shift;
  rec.exit.vx = mp.exit.vx;
  rec.exit.vt = -rho;
  rec.grazing = mp.grazing;
  return rec;
}

}  // namespace stationary
