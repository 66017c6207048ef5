#include "stationary/gauge.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <sstream>

namespace stationary {

GaugeTransform GaugeTransform::identity(int dim) {
  return {[](const Vector& x) { return x; }, [dim](const Vector&) { return Matrix(Matrix::Identity(dim, dim)); },
          constant_scalar<double>(dim, 0.0), constant_scalar<double>(dim, 1.0)};
}

GaugeTransform boundary_fixing_gauge(const Domain<double>& domain, const GaugeParams& params) {
  const int n = domain.dim();
  const auto b = domain.b;
  const double eps = params.epsilon;
  const Vector a = params.shift.size() ? params.shift : Vector(Vector::Zero(n));
  const Matrix R = params.rotation.size() ? params.rotation : Matrix(Matrix::Zero(n, n));
  const auto q = params.q;
  const double c = params.mu_scale;

  GaugeTransform g;
  g.f = [b, eps, a, R](const Vector& x) {
    const double bx = b(x);
    return Vector(x + eps * bx * bx * (a + R * x));
  };
  g.Df = [b, eps, a, R, n](const Vector& x) {
    const double bx = b(x);
    return Matrix(Matrix::Identity(n, n) + eps * (2.0 * bx * (a + R * x) * b.grad(x).transpose() + bx * bx * R));
  };
  g.phi.value = [b, q](const Vector& x) { return b(x) * q(x); };
  g.phi.gradient = [b, q](const Vector& x) { return Vector(q(x) * b.grad(x) + b(x) * q.gradient(x)); };
  g.mu.value = [b, c](const Vector& x) { return std::exp(c * b(x)); };
  g.mu.gradient = [b, c](const Vector& x) { return Vector(c * std::exp(c * b(x)) * b.grad(x)); };
  return g;
}

void validate_gauge(const GaugeTransform& gauge, const Domain<double>& domain, int boundary_points) {
  for (const auto& x : boundary_samples(domain, boundary_points)) {
    if ((gauge.f(x) - x).norm() > 1e-10) throw Error(ErrorCode::InvalidGauge, "f moves a boundary point");
    if (std::abs(gauge.phi(x)) > 1e-10) throw Error(ErrorCode::InvalidGauge, "phi does not vanish on the boundary");
    if (std::abs(gauge.mu(x) - 1.0) > 1e-10) throw Error(ErrorCode::InvalidGauge, "mu differs from 1 on the boundary");
  }
  auto pts = lattice_samples(domain, 10);
  const auto bdry = boundary_samples(domain, boundary_points);
  pts.insert(pts.end(), bdry.begin(), bdry.end());
  for (const auto& x : pts) {
    const Matrix J = gauge.Df(x);
    if (!(std::abs(J.determinant()) > 1e-10)) throw Error(ErrorCode::InvalidGauge, "Jacobian of f is singular");
    if (!(gauge.mu(x) > 0)) throw Error(ErrorCode::InvalidGauge, "mu must be positive");
    if (!in_domain(domain, gauge.f(x))) throw Error(ErrorCode::InvalidGauge, "f does not map N into N");
  }
}

namespace {

Matrix pullback_metric(const MetricField<double>& h, const GaugeTransform& g, const Vector& x) {
  const Matrix J = g.Df(x);
  return J.transpose() * h(g.f(x)) * J;
}

Vector pullback_covector(const CovectorField<double>& w, const GaugeTransform& g, const Vector& x) {
  return g.Df(x).transpose() * w(g.f(x));
}

}  // namespace

Spec apply_gauge_ssm(const Spec& spec, const GaugeTransform& gauge, double rho, double m) {
  if (rho == 0) throw Error(ErrorCode::InvalidSpec, "rho must be nonzero");
  const double ratio = m * m / (rho * rho);
  Spec out;
  out.name = spec.name + "+gauge";
  out.domain = spec.domain;
  const auto h = spec.h;
  const auto w = spec.omega;
  const auto lam = spec.lambda;
  out.h.value = [h, gauge](const Vector& x) { return Matrix(pullback_metric(h, gauge, x) / gauge.mu(x)); };
  out.omega.value = [w, gauge, rho](const Vector& x) { return Vector(pullback_covector(w, gauge, x) + gauge.phi.grad(x) / rho); };
  out.lambda.value = [lam, gauge, ratio](const Vector& x) {
    const double inv = gauge.mu(x) * (1.0 / lam(gauge.f(x)) - ratio) + ratio;
    return 1.0 / inv;
  };
  auto pts = lattice_samples(spec.domain, 10);
  const auto bdry = boundary_samples(spec.domain, 200);
  pts.insert(pts.end(), bdry.begin(), bdry.end());
  for (const auto& x : pts) {
    const double l = out.lambda(x);
    if (!(l > 0) || !std::isfinite(l)) throw Error(ErrorCode::GaugeBreaksSignature, "transformed lambda is not positive");
  }
  return out;
}

MPSystem apply_gauge_mp(const MPSystem& sys, const GaugeTransform& gauge, double k) {
  MPSystem out = sys;
  out.name = sys.name + "+gauge";
  const auto h = sys.h;
  const auto alpha = sys.alpha;
  const auto U = sys.U;
  out.h = MetricField<double>{[h, gauge](const Vector& x) { return Matrix(pullback_metric(h, gauge, x) / gauge.mu(x)); }, {}};
  out.alpha = CovectorField<double>{
      [alpha, gauge](const Vector& x) { return Vector(pullback_covector(alpha, gauge, x) + gauge.phi.grad(x)); }, {}};
  out.U = ScalarField<double>{[U, gauge, k](const Vector& x) { return gauge.mu(x) * (U(gauge.f(x)) - k) + k; }, {}};
  out.k = k;
  out.base.reset();
  return out;
}

GaugeTransform compose(const GaugeTransform& first, const GaugeTransform& second) {
  GaugeTransform g;
  g.f = [first, second](const Vector& x) { return first.f(second.f(x)); };
  g.Df = [first, second](const Vector& x) { return Matrix(first.Df(second.f(x)) * second.Df(x)); };
  g.phi.value = [first, second](const Vector& x) { return first.phi(second.f(x)) + second.phi(x); };
  g.phi.gradient = [first, second](const Vector& x) {
    return Vector(second.Df(x).transpose() * first.phi.grad(second.f(x)) + second.phi.grad(x));
  };
  g.mu.value = [first, second](const Vector& x) { return second.mu(x) * first.mu(second.f(x)); };
  g.mu.gradient = [first, second](const Vector& x) {
    const Vector y = second.f(x);
    return Vector(second.mu.grad(x) * first.mu(y) + second.mu(x) * second.Df(x).transpose() * first.mu.grad(y));
  };
  return g;
}

BoundaryTraceCheck compare_boundary_traces(const Spec& a, const Spec& b, int points) {
  BoundaryTraceCheck c;
  for (const auto& x : boundary_samples(a.domain, points)) {
    c.h = std::max(c.h, (a.h(x) - b.h(x)).cwiseAbs().maxCoeff());
    c.lambda = std::max(c.lambda, std::abs(a.lambda(x) - b.lambda(x)));
    const Vector nu = outward_normal(a.h, a.domain, x);
    const Matrix T = tangent_basis<double>(a.h(x), nu);
    c.omega_tangential = std::max(c.omega_tangential, (T.transpose() * (a.omega(x) - b.omega(x))).cwiseAbs().maxCoeff());
  }
  return c;
}

std::vector<BoundaryTangent> sample_entries(const Spec& spec, double rho, double m, int count, unsigned seed,
                                            double max_fraction) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> frac(-max_fraction, max_fraction);
  std::uniform_real_distribution<double> offset(0.0, 1.0);
  const double phase = 2.0 * 3.14159265358979323846 * offset(rng) / std::max(count, 1);
  std::vector<BoundaryTangent> out;
  for (const auto& x : boundary_samples(spec.domain, count, phase)) {
    const Vector nu = outward_normal(spec.h, spec.domain, x);
    const Matrix T = tangent_basis<double>(spec.h(x), nu);
    const double speed2 = rho * rho / spec.lambda(x) - m * m;
    if (!(speed2 > 0)) throw Error(ErrorCode::NoInwardSolution, "momentum not admissible at a boundary point");
    Vector c(T.cols());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = frac(rng);
    if (c.norm() > max_fraction) c *= max_fraction / c.norm();
    BoundaryTangent e;
    e.x = x;
    e.t = 0;
    e.vt = -rho;
    e.vx = std::sqrt(speed2) * (T * c);
    out.push_back(e);
  }
  return out;
}

std::vector<EntryDeviation> scattering_deviations(const Spec& a, const Spec& b, double rho, double m,
                                                  const std::vector<BoundaryTangent>& entries, const FlowOptions& options) {
  std::vector<EntryDeviation> out;
  out.reserve(entries.size());
  for (const auto& entry : entries) {
    EntryDeviation d;
    std::optional<ScatteringRecord> ra, rb;
    std::optional<ErrorCode> ea, eb;
    try {
      ra = scattering_rho_m(a, rho, m, entry, options);
    } catch (const Error& e) {
      ea = e.code();
      d.error_a = e.what();
    }
    try {
      rb = scattering_rho_m(b, rho, m, entry, options);
    } catch (const Error& e) {
      eb = e.code();
      d.error_b = e.what();
    }
    if (ra && rb) {
      d.exit_point = (ra->exit.x - rb->exit.x).cwiseAbs().maxCoeff();
      d.exit_tangent = std::max((ra->exit.vx - rb->exit.vx).cwiseAbs().maxCoeff(), std::abs(ra->exit.vt - rb->exit.vt));
      d.T = std::abs(ra->T - rb->T);
      d.time_shift = std::abs(ra->time_shift - rb->time_shift);
      d.action = std::abs(ra->action - rb->action);
    } else {
      d.outcome = (ea && eb && *ea == *eb) ? EntryOutcome::BothFailed : EntryOutcome::OneFailed;
    }
    out.push_back(std::move(d));
  }
  return out;
}

InvarianceReport verify_scattering_invariance(const Spec& a, const Spec& b, double rho, double m, int n_samples,
                                              unsigned seed, double threshold) {
  const auto traces = compare_boundary_traces(a, b);
  if (traces.worst() > 1e-8) {
    std::ostringstream msg;
    msg << "boundary traces differ by " << traces.worst();
    throw Error(ErrorCode::BoundaryTraceMismatch, msg.str());
  }
  InvarianceReport rep;
  rep.requested = n_samples;
  for (const auto& d : scattering_deviations(a, b, rho, m, sample_entries(a, rho, m, n_samples, seed))) {
    switch (d.outcome) {
      case EntryOutcome::Compared:
        ++rep.compared;
        rep.exit_point = std::max(rep.exit_point, d.exit_point);
        rep.exit_tangent = std::max(rep.exit_tangent, d.exit_tangent);
        rep.T = std::max(rep.T, d.T);
        rep.time_shift = std::max(rep.time_shift, d.time_shift);
        rep.action = std::max(rep.action, d.action);
        break;
      case EntryOutcome::BothFailed: ++rep.skipped; break;
      case EntryOutcome::OneFailed: ++rep.mismatched; break;
    }
  }
  rep.pass = rep.compared > 0 && rep.mismatched == 0 && rep.max_deviation() <= threshold;
  return rep;
}

Spec psi_pullback(const Spec& spec, const GaugeTransform& gauge, double rho) {
  if (rho == 0) throw Error(ErrorCode::InvalidSpec, "rho must be nonzero");
  for (const auto& x : lattice_samples(spec.domain, 6))
    if (std::abs(gauge.mu(x) - 1.0) > 1e-12) throw Error(ErrorCode::InvalidGauge, "psi_pullback needs mu = 1");

  // Psi*g at x: D Psi^T g(f(x)) D Psi with D Psi = [[1, dphi_hat^T], [0, Df]].
  auto pulled = [spec, gauge, rho](const Vector& x) {
    const auto n = x.size();
    Matrix D = Matrix::Zero(n + 1, n + 1);
    D(0, 0) = 1.0;
    D.block(0, 1, 1, n) = (-gauge.phi.grad(x) / rho).transpose();
    D.block(1, 1, n, n) = gauge.Df(x);
    const Vector y = gauge.f(x);
    const Matrix g = metric_blocks<double>(spec.h(y), spec.omega(y), spec.lambda(y)).g;
    return Matrix(D.transpose() * g * D);
  };
  Spec out;
  out.name = spec.name + "+psi";
  out.domain = spec.domain;
  out.lambda.value = [pulled](const Vector& x) { return -pulled(x)(0, 0); };
  out.omega.value = [pulled](const Vector& x) {
    const Matrix g = pulled(x);
    const auto n = x.size();
    return Vector(g.block(1, 0, n, 1) / -g(0, 0));
  };
  out.h.value = [pulled](const Vector& x) {
    const Matrix g = pulled(x);
    const auto n = x.size();
    const double lam = -g(0, 0);
    const Vector w = g.block(1, 0, n, 1) / lam;
    return Matrix(g.block(1, 1, n, n) + lam * w * w.transpose());
  };

  const Spec reference = apply_gauge_ssm(spec, gauge, rho, 1.0);
  double worst = 0;
  auto pts = lattice_samples(spec.domain, 8);
  const auto bdry = boundary_samples(spec.domain, 32);
  pts.insert(pts.end(), bdry.begin(), bdry.end());
  for (const auto& x : pts) {
    const Matrix ga = metric_blocks<double>(out.h(x), out.omega(x), out.lambda(x)).g;
    const Matrix gb = metric_blocks<double>(reference.h(x), reference.omega(x), reference.lambda(x)).g;
    worst = std::max(worst, (ga - gb).cwiseAbs().maxCoeff() / (1.0 + gb.cwiseAbs().maxCoeff()));
  }
  if (worst > 1e-10) {
    std::ostringstream msg;
    msg << "pullback and gauge formula disagree by " << worst;
    throw Error(ErrorCode::ConventionMismatch, msg.str());
  }
  return out;
}

}  // namespace stationary
