#include "stationary/mp.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <sstream>

namespace stationary {

Matrix MPSystem::Y(const Vector& x) const { return -checked_inverse<double>(h(x)) * Omega(x); }

double MPSystem::energy(const ReducedState& s) const { return 0.5 * s.vx.dot(h(s.x) * s.vx) + U(s.x); }

MPSystem reduce(const Spec& spec, double rho, double m) {
  MPSystem sys;
  sys.name = spec.name;
  sys.domain = spec.domain;
  sys.h = spec.h;
  const auto omega = spec.omega;
  const auto lambda = spec.lambda;
  sys.alpha.value = [omega, rho](const Vector& x) { return Vector(rho * omega(x)); };
  if (omega.analytic()) sys.alpha.jacobian = [omega, rho](const Vector& x) { return Matrix(rho * omega.jac(x)); };
  const double r2 = rho * rho;
  sys.U.value = [lambda, r2](const Vector& x) { return -r2 / (2.0 * lambda(x)); };
  sys.U.gradient = [lambda, r2](const Vector& x) {
    const double l = lambda(x);
    return Vector(r2 * lambda.grad(x) / (2.0 * l * l));
  };
  sys.k = -0.5 * m * m;
  sys.rho = rho;
  sys.base = std::make_shared<const Spec>(spec);
  return sys;
}

Vector mp_acceleration(const MPSystem& sys, const Vector& x, const Vector& v) {
  const Matrix h = sys.h(x);
  const Matrix h_inv = checked_inverse<double>(h);
  const auto gamma = christoffel_from<double>(h_inv, sys.h.partials(x));
  return -gamma.contract(v, v) - h_inv * (sys.Omega(x) * v) - h_inv * sys.U.grad(x);
}

ReducedState mp_rhs(const MPSystem& sys, const ReducedState& state) {
  require_in_domain(sys.domain, state.x);
  return {state.vx, mp_acceleration(sys, state.x, state.vx)};
}

ReducedState TrajectoryTN::state(double s) const {
  const Vector y = path(s);
  return {y.head(dim), y.tail(dim)};
}

namespace detail {

void mp_rhs_packed(const MPSystem& sys, const Vector& y, Vector& dy) {
  const auto n = y.size() / 2;
  dy.resize(y.size());
  dy.head(n) = y.tail(n);
  dy.tail(n) = mp_acceleration(sys, y.head(n), y.tail(n));
}

double mp_energy_packed(const MPSystem& sys, const Vector& y) {
  const auto n = y.size() / 2;
  return sys.energy({y.head(n), y.tail(n)});
}

}  // namespace detail

namespace {

double mp_default_horizon(const MPSystem& sys, const ReducedState& s) {
  const auto& d = sys.domain;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sys.h(d.center), Eigen::EigenvaluesOnly);
  const double diameter = 2.0 * d.radius * std::sqrt(eig.eigenvalues().maxCoeff());
  const double speed = std::sqrt(s.vx.dot(sys.h(s.x) * s.vx));
  return speed > 0 ? 10.0 * diameter / speed : 10.0 * diameter;
}

}  // namespace

TrajectoryTN integrate_mp(const MPSystem& sys, const ReducedState& state0, const FlowOptions& options) {
  require_in_domain(sys.domain, state0.x);
  const auto n = state0.x.size();
  const double horizon = std::isnan(options.horizon) ? mp_default_horizon(sys, state0) : options.horizon;
  Vector y0(2 * n);
  y0 << state0.x, state0.vx;

  auto rhs = [&sys](const Vector& y, Vector& dy) { detail::mp_rhs_packed(sys, y, dy); };
  EventFn event;
  if (options.stop_at_boundary) event = [&sys, n](const Vector& y) { return sys.domain.b(y.head(n)); };
  const double E0 = sys.energy(state0);

  Tolerances tol = options.tol;
  TrajectoryTN traj;
  traj.dim = static_cast<int>(n);
  for (int attempt = 0;; ++attempt) {
    OdeResult res = integrate_ode(rhs, y0, 0.0, horizon, tol, event);
    traj.path = std::move(res.path);
    const Vector yend = traj.path.back();
    traj.exit = detail::classify_exit(sys.domain, res.event_hit, yend.head(n), yend.tail(n));
    traj.log.names = {"E"};
    traj.log.initial = {E0};
    traj.log.max_drift = {0.0};
    if (!options.monitor) break;
    for (double s : traj.path.knots())
      traj.log.max_drift[0] = std::max(traj.log.max_drift[0], std::abs(detail::mp_energy_packed(sys, traj.path(s)) - E0));
    if (traj.log.worst_relative() <= options.drift_threshold) break;
    std::ostringstream msg;
    msg << "ConservationWarning: relative energy drift " << traj.log.worst_relative();
    traj.log.warnings.push_back(msg.str());
    if (attempt >= options.max_retries) break;
    ++traj.log.retries;
    tol.rtol = std::max(tol.rtol * 1e-2, 1e-14);
    tol.atol = std::max(tol.atol * 1e-2, 1e-14);
  }
  return traj;
}

TrajectoryTN project(const Spec& spec, const TrajectoryM& traj, double rho) {
  const double limit = 1e-8 * (1.0 + std::abs(rho));
  for (double s : traj.path.knots()) {
    const double J = detail::momentum_packed(spec, traj.path(s));
    if (std::abs(J - rho) > limit) {
      std::ostringstream msg;
      msg << "J = " << J << " differs from rho = " << rho << " at s = " << s;
      throw Error(ErrorCode::MomentumMismatch, msg.str());
    }
  }
  const auto n = traj.dim;
  TrajectoryTN out;
  out.dim = n;
  out.exit = traj.exit;
  const int degree = traj.path.max_degree();
  out.path = traj.path.remap(1.0, 0.0, degree, [n](double, const Vector& y) {
    Vector r(2 * n);
    r << y.segment(1, n), y.segment(n + 2, n);
    return r;
  });
  return out;
}

TrajectoryM lift(const MPSystem& sys, const TrajectoryTN& traj, double t0) {
  if (!sys.base || !sys.rho) throw Error(ErrorCode::InvalidSpec, "lift needs a system produced by reduce()");
  const Spec& spec = *sys.base;
  const double rho = *sys.rho;
  const auto n = traj.dim;
  auto tdot = [&](const Vector& y) {
    const Vector x = y.head(n);
    return -rho / spec.lambda(x) + spec.omega(x).dot(y.tail(n));
  };
  auto full = [&](double t, const Vector& y) {
    const Vector x = y.head(n);
    Vector out(2 * n + 2);
    out << t, x, tdot(y), y.tail(n);
    return out;
  };

  constexpr int kDegree = 7;
  TrajectoryM out;
  out.dim = n;
  out.exit = traj.exit;
  double t = t0;
  for (const auto& seg : traj.path.segments()) {
    auto t_at = [&](double theta) {
      if (theta == 0.0) return 0.0;
      return boost::math::quadrature::gauss<double, 10>::integrate([&](double u) { return tdot(seg.at(u)); }, 0.0, theta) *
             seg.length;
    };
    out.path.append(fit_segment(seg.s0, seg.length, kDegree, [&](double theta) { return full(t + t_at(theta), seg.at(theta)); }));
    t += t_at(1.0);
  }
  out.log.names = {"J", "H"};
  const Vector y0 = out.path.front();
  out.log.initial = {detail::momentum_packed(spec, y0), detail::hamiltonian_packed(spec, y0)};
  out.log.max_drift = {0.0, 0.0};
  for (double s : out.path.knots()) {
    const Vector y = out.path(s);
    out.log.max_drift[0] = std::max(out.log.max_drift[0], std::abs(detail::momentum_packed(spec, y) - out.log.initial[0]));
    out.log.max_drift[1] = std::max(out.log.max_drift[1], std::abs(detail::hamiltonian_packed(spec, y) - out.log.initial[1]));
  }
  return out;
}

MassEnergyCheck mass_energy_check(const MPSystem& sys, const ReducedState& state, double m) {
  MassEnergyCheck c;
  c.residual = std::abs(sys.energy(state) + 0.5 * m * m);
  c.ok = c.residual <= 1e-9;
  return c;
}

MPSystem scale_momentum(const MPSystem& unit, double c) {
  MPSystem out = unit;
  const auto alpha = unit.alpha;
  const auto U = unit.U;
  out.alpha.value = [alpha, c](const Vector& x) { return Vector(c * alpha(x)); };
  out.alpha.jacobian = alpha.analytic() ? std::function<Matrix(const Vector&)>([alpha, c](const Vector& x) { return Matrix(c * alpha.jac(x)); })
                                        : nullptr;
  out.U.value = [U, c](const Vector& x) { return c * c * U(x); };
  out.U.gradient = U.analytic() ? std::function<Vector(const Vector&)>([U, c](const Vector& x) { return Vector(c * c * U.grad(x)); })
                                : nullptr;
  out.k = c * c * unit.k;
  if (unit.rho) out.rho = *unit.rho * c;
  return out;
}

TrajectoryTN rescale_momentum(const MPSystem& unit, const TrajectoryTN& traj, double rho, double m) {
  if (rho == 0) throw Error(ErrorCode::InvalidSpec, "rho must be nonzero");
  const double expected = -m * m / (2.0 * rho * rho);
  const double E = unit.energy(traj.state(traj.path.begin()));
  if (std::abs(E - expected) > 1e-8 * (1.0 + std::abs(expected))) {
    std::ostringstream msg;
    msg << "trajectory energy " << E << " but " << expected << " expected";
    throw Error(ErrorCode::EnergyMismatch, msg.str());
  }
  const auto n = traj.dim;
  TrajectoryTN out;
  out.dim = n;
  out.exit = traj.exit;
  const int degree = traj.path.max_degree();
  out.path = traj.path.remap(rho, 0.0, degree, [n, rho](double, const Vector& y) {
    Vector r(2 * n);
    r << y.head(n), rho * y.tail(n);
    return r;
  });
  return out;
}

}  // namespace stationary
