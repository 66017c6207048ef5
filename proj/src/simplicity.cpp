#include "stationary/simplicity.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <sstream>

namespace stationary {

double AdmissibilityReport::threshold() const { return m * std::sqrt(lambda_max); }

std::string AdmissibilityReport::band() const {
  std::ostringstream os;
  os.precision(17);
  os << "(-inf, " << -threshold() << ") U (" << threshold() << ", inf)";
  return os.str();
}

AdmissibilityReport AdmissibilityReport::with_rho(double r) const {
  AdmissibilityReport out = *this;
  out.rho = r;
  out.margin = r * r / (m * m) - lambda_max;
  out.band_ok = std::abs(r) > threshold();
  return out;
}

AdmissibilityReport admissible_band(const Spec& spec, double m, const ValidationOptions& sampling) {
  if (!(m > 0)) throw Error(ErrorCode::InvalidSpec, "admissible_band needs m > 0");
  auto pts = lattice_samples(spec.domain, sampling.lattice_per_axis);
  const auto bdry = boundary_samples(spec.domain, sampling.boundary_samples);
  pts.insert(pts.end(), bdry.begin(), bdry.end());
  AdmissibilityReport r;
  r.m = m;
  r.lambda_min = std::numeric_limits<double>::infinity();
  r.lambda_max = -std::numeric_limits<double>::infinity();
  for (const auto& x : pts) {
    const double l = spec.lambda(x);
    r.lambda_min = std::min(r.lambda_min, l);
    r.lambda_max = std::max(r.lambda_max, l);
  }
  return r;
}

HyperbolicAngle hyperbolic_angle(const Spec& spec, const Vector& x, double rho, double m) {
  require_in_domain(spec.domain, x);
  const double bound = m * std::sqrt(spec.lambda(x));
  if (!(std::abs(rho) > bound)) throw Error(ErrorCode::AngleUndefined, "|rho| <= m sqrt(lambda)");
  return {std::acosh(std::abs(rho) / bound), rho < 0};
}

std::vector<Vector> tangent_directions(const Matrix& h, const Vector& normal, int count) {
  const Matrix basis = tangent_basis<double>(h, normal);
  const int tdim = static_cast<int>(basis.cols());
  std::vector<Vector> out;
  if (tdim == 1) {
    out.push_back(basis.col(0));
    out.push_back(-basis.col(0));
    return out;
  }
  for (const auto& c : sphere_directions<double>(tdim, count)) out.push_back(basis * c);
  return out;
}

namespace {

double normal_step(const Vector& x) { return 1e-3 * (1.0 + x.norm()); }

Vector covariant_normal_derivative(const MetricField<double>& h, const Domain<double>& domain, const Vector& x,
                                   const Vector& xi) {
  auto nu = [&](const Vector& p) { return outward_normal(h, domain, p); };
  const Vector dnu = directional_derivative4<double>(nu, x, xi, normal_step(x));
  const auto gamma = christoffel_h(h, x);
  return dnu + gamma.contract(xi, nu(x));
}

}  // namespace

double second_fundamental_form(const MetricField<double>& h, const Domain<double>& domain, const Vector& x,
                               const Vector& xi) {
  return covariant_normal_derivative(h, domain, x, xi).dot(h(x) * xi);
}

ConvexityReport mp_convexity(const MPSystem& sys, const BoundarySampling& sampling) {
  ConvexityReport rep;
  for (const auto& x : boundary_samples(sys.domain, sampling.points, sampling.angle_offset)) {
    const Matrix h = sys.h(x);
    const Vector nu = outward_normal(sys.h, sys.domain, x);
    const double speed2 = 2.0 * (sys.k - sys.U(x));
    if (!(speed2 > 0)) {
      ++rep.skipped;
      continue;
    }
    const Vector nu_in = -nu;
    const Matrix Y = sys.Y(x);
    const double potential = sys.U.grad(x).dot(nu_in);
    for (const auto& e : tangent_directions(h, nu, sampling.directions)) {
      ConvexitySample s;
      s.x = x;
      s.xi = std::sqrt(speed2) * e;
      s.pi = second_fundamental_form(sys.h, sys.domain, x, s.xi);
      s.force = (Y * s.xi).dot(h * nu_in);
      s.potential = potential;
      s.margin = s.pi - s.force + s.potential;
      rep.min_margin = std::min(rep.min_margin, s.margin);
      rep.samples.push_back(std::move(s));
    }
  }
  rep.strictly_convex = !rep.samples.empty() && rep.min_margin > 0;
  return rep;
}

double lorentzian_second_fundamental(const Spec& spec, const Vector& x, const Vector& v) {
  const auto n = x.size();
  auto nu_m = [&](const Vector& p) {
    const Vector nx = outward_normal(spec.h, spec.domain, p);
    Vector out(n + 1);
    out << spec.omega(p).dot(nx), nx;
    return out;
  };
  const Vector vx = v.tail(n);
  const Vector nu = nu_m(x);
  const Vector dnu = directional_derivative4<double>(nu_m, x, vx, normal_step(x));
  const auto G = christoffel_g_closed(local_fields(spec, x));
  const Vector cov = dnu + G.contract(v, nu);
  const auto g = metric_blocks<double>(spec.h(x), spec.omega(x), spec.lambda(x));
  return cov.dot(g.g * v);
}

BridgeReport lorentzian_convexity_bridge(const Spec& spec, double rho, double m, const BoundarySampling& sampling) {
  const MPSystem sys = reduce(spec, rho, m);
  BridgeReport rep;
  for (const auto& x : boundary_samples(spec.domain, sampling.points, sampling.angle_offset)) {
    const Matrix h = spec.h(x);
    const Vector nu = outward_normal(spec.h, spec.domain, x);
    const Vector nu_in = -nu;
    const double lam = spec.lambda(x);
    const double speed2 = rho * rho / lam - m * m;
    if (!(speed2 > 0)) continue;
    const Vector w = spec.omega(x);
    const Matrix Y = sys.Y(x);
    const double dU = sys.U.grad(x).dot(nu_in);
    // symmetrized covariant derivative of rho * omega
    const auto gamma = christoffel_h(spec.h, x);
    Matrix cov = rho * spec.omega.jac(x);
    for (Eigen::Index i = 0; i < cov.rows(); ++i)
      for (Eigen::Index j = 0; j < cov.cols(); ++j)
        for (Eigen::Index k = 0; k < cov.rows(); ++k) cov(i, j) -= rho * gamma(k, i, j) * w(k);
    const Matrix sym = 0.5 * (cov + cov.transpose());

    for (const auto& e : tangent_directions(h, nu, sampling.directions)) {
      const Vector vx = std::sqrt(speed2) * e;
      BridgeRow row;
      row.x = x;
      row.v.resize(vx.size() + 1);
      row.v << -rho / lam + w.dot(vx), vx;
      row.lorentzian = lorentzian_second_fundamental(spec, x, row.v);
      row.mp = second_fundamental_form(spec.h, spec.domain, x, vx) - (Y * vx).dot(h * nu_in) + dU;
      rep.max_omega_tangent = std::max(rep.max_omega_tangent, std::abs(w.dot(vx)));
      rep.max_force_potential = std::max(rep.max_force_potential, std::abs(nu_in.dot(sym * vx) - dU));
      rep.max_abs_diff = std::max(rep.max_abs_diff, std::abs(row.lorentzian - row.mp));
      rep.min_lorentzian = std::min(rep.min_lorentzian, row.lorentzian);
      rep.min_mp = std::min(rep.min_mp, row.mp);
      if (std::abs(row.lorentzian) > 1e-8 && std::abs(row.mp) > 1e-8 && (row.lorentzian > 0) != (row.mp > 0))
        rep.signs_agree = false;
      rep.rows.push_back(std::move(row));
    }
  }
  rep.applicable = !rep.rows.empty() && rep.max_omega_tangent <= 1e-9;
  return rep;
}

namespace detail {

double energy_speed(const MPSystem& sys, const Vector& x, double k) {
  const double speed2 = 2.0 * (k - sys.U(x));
  if (!(speed2 > 0)) throw Error(ErrorCode::EnergyMismatch, "energy level lies below the potential at the base point");
  return std::sqrt(speed2);
}

TrajectoryTN exp_trajectory(const MPSystem& sys, const Vector& x, const Vector& p, double k, const Tolerances& tol) {
  const double speed = energy_speed(sys, x, k);
  const double len = std::sqrt(p.dot(sys.h(x) * p));
  ReducedState s0{x, len > 0 ? Vector(p * (speed / len)) : Vector(Vector::Zero(x.size()))};
  FlowOptions opts;
  opts.horizon = len / speed;
  opts.tol = tol;
  opts.stop_at_boundary = false;
  opts.monitor = false;
  return integrate_mp(sys, s0, opts);
}

}  // namespace detail

Vector mp_exponential(const MPSystem& sys, const Vector& x, const Vector& v, double s) {
  require_in_domain(sys.domain, x);
  if (s < 0) throw Error(ErrorCode::InvalidSpec, "mp_exponential needs s >= 0");
  if (s == 0) return x;
  const double speed = detail::energy_speed(sys, x, sys.k);
  const double len = std::sqrt(v.dot(sys.h(x) * v));
  const Vector p = v * (s * speed / len);
  const auto traj = detail::exp_trajectory(sys, x, p, sys.k, Tolerances{});
  for (double t : traj.path.knots()) {
    const Vector y = traj.path(t).head(x.size());
    if (!in_domain(sys.domain, y)) throw Error(ErrorCode::LeftDomain, "MP geodesic leaves N before time s");
  }
  return traj.path.back().head(x.size());
}

const ShootingSolution& ShootingReport::best() const {
  if (solutions.empty()) throw Error(ErrorCode::ShootingFailed, "no solution");
  return solutions.front();
}

namespace {

bool stays_inside(const MPSystem& sys, const TrajectoryTN& traj) {
  const auto n = traj.dim;
  for (double t : traj.path.knots())
    if (sys.domain.b(traj.path(t).head(n)) < -1e-8) return false;
  return true;
}

std::vector<Vector> shooting_seeds(const Vector& x, const Vector& y, int count) {
  const auto n = x.size();
  const Vector chord = y - x;
  const double d = chord.norm();
  const Vector u = chord / d;
  Vector e = Vector::Zero(n);
  for (Eigen::Index k = 0; k < n && n > 1; ++k) {
    Vector c = Vector::Unit(n, k) - u(k) * u;
    if (c.norm() > 0.5) {
      e = c.normalized();
      break;
    }
  }
  std::vector<Vector> seeds;
  for (int j = 0; j < count; ++j) {
    double th = 2.0 * std::numbers::pi * j / count;
    if (th > std::numbers::pi) th -= 2.0 * std::numbers::pi;
    th = std::clamp(th, -0.9 * std::numbers::pi, 0.9 * std::numbers::pi);
    // arc length of a circle leaving the chord at angle th
    const double len = std::abs(th) < 1e-12 ? d : d * th / std::sin(th);
    seeds.push_back(len * (std::cos(th) * u + std::sin(th) * e));
  }
  return seeds;
}

}  // namespace

ShootingReport shoot_connect(const MPSystem& sys, const Vector& x, const Vector& y, double k, const ShootingOptions& options) {
  require_in_domain(sys.domain, x);
  require_in_domain(sys.domain, y);
  const auto n = x.size();
  const double speed = detail::energy_speed(sys, x, k);
  const Matrix hx = sys.h(x);
  ShootingReport rep;

  auto make_solution = [&](const Vector& p, double residual, double condition) {
    ShootingSolution s;
    s.p = p;
    const double len = std::sqrt(p.dot(hx * p));
    s.direction = len > 0 ? Vector(p / len) : Vector(Vector::Zero(n));
    s.s = len / speed;
    s.residual = residual;
    s.condition = condition;
    return s;
  };

  if ((y - x).norm() <= 1e-14) {
    rep.converged.push_back(make_solution(Vector::Zero(n), 0.0, 1.0));
    rep.solutions = rep.converged;
    return rep;
  }

  const double chord = (y - x).norm();
  const double max_len = options.max_length * sys.domain.radius;
  auto endpoint = [&](const Vector& p) { return Vector(detail::exp_trajectory(sys, x, p, k, options.tol).path.back().head(n)); };
  auto jacobian = [&](const Vector& p, const Vector& fp) {
    Matrix J(n, n);
    const double step = 1e-6 * (1.0 + p.norm());
    for (Eigen::Index c = 0; c < n; ++c) {
      Vector pp = p;
      pp(c) += step;
      J.col(c) = (endpoint(pp) - fp) / step;
    }
    return J;
  };

  for (const Vector& seed : shooting_seeds(x, y, std::max(1, options.starts))) {
    Vector p = seed;
    Vector fp = endpoint(p);
    double res = (fp - y).norm();
    bool ok = false;
    try {
      for (int it = 0; it < options.max_iterations && std::isfinite(res); ++it) {
        if (res <= options.tolerance) {
          ok = true;
          break;
        }
        const Matrix J = jacobian(p, fp);
        Vector dp = J.fullPivLu().solve(y - fp);
        if (!dp.allFinite()) break;
        const double cap = 0.5 * std::max(p.norm(), chord);
        if (dp.norm() > cap) dp *= cap / dp.norm();
        double a = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 12; ++ls, a *= 0.5) {
          const Vector trial = p + a * dp;
          if (trial.norm() > max_len) continue;
          const Vector ft = endpoint(trial);
          const double rt = (ft - y).norm();
          if (rt < res) {
            p = trial;
            fp = ft;
            res = rt;
            improved = true;
            break;
          }
        }
        if (!improved) break;
      }
      if (!ok && res <= options.tolerance) ok = true;
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) continue;
    if (!stays_inside(sys, detail::exp_trajectory(sys, x, p, k, options.tol))) {
      ++rep.discarded_left_domain;
      continue;
    }
    const Matrix J = jacobian(p, fp);
    Eigen::JacobiSVD<Matrix> svd(J);
    const auto& sv = svd.singularValues();
    const double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    ShootingSolution sol = make_solution(p, res, cond);
    rep.converged.push_back(sol);
    bool fresh = true;
    for (const auto& other : rep.solutions)
      if ((other.p - p).norm() <= 1e-6 * (1.0 + p.norm())) fresh = false;
    if (fresh) rep.solutions.push_back(sol);
  }
  if (rep.solutions.empty()) throw Error(ErrorCode::ShootingFailed, "no start converged to a connecting geodesic inside N");
  std::sort(rep.solutions.begin(), rep.solutions.end(), [](const auto& a, const auto& b) { return a.s < b.s; });
  rep.not_simple = rep.solutions.size() > 1;
  return rep;
}

}  // namespace stationary
