#pragma once

#include "stationary/fields.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace stationary {

/// N = {b >= 0}, boundary {b = 0}. N must be star-shaped about `center`
/// and contained in the open ball of radius `radius` around it; boundary
/// sampling relies on both.
template <typename Scalar>
struct Domain {
  ScalarField<Scalar> b;
  Vec<Scalar> center;
  Scalar radius{1};

  int dim() const { return static_cast<int>(center.size()); }
};

/// |b(x)| <= 1e-10 * (1 + |x|) counts as on the boundary.
template <typename Scalar>
Scalar boundary_tolerance(const Vec<Scalar>& x) {
  return Scalar(1e-10) * (Scalar(1) + x.norm());
}

template <typename Scalar>
bool in_domain(const Domain<Scalar>& d, const Vec<Scalar>& x) {
  return d.b(x) >= -boundary_tolerance(x);
}

template <typename Scalar>
bool on_boundary(const Domain<Scalar>& d, const Vec<Scalar>& x) {
  return std::abs(d.b(x)) <= boundary_tolerance(x);
}

template <typename Scalar>
Domain<Scalar> unit_ball(int dim, Scalar radius = Scalar(1)) {
  ScalarField<Scalar> b{[radius](const Vec<Scalar>& x) { return radius * radius - x.squaredNorm(); },
                        [](const Vec<Scalar>& x) { return Vec<Scalar>(Scalar(-2) * x); }};
  return {b, Vec<Scalar>::Zero(dim), Scalar(1.25) * radius};
}

enum class DerivativeMode { Analytic, FiniteDifference };

/// (N, h, omega, lambda) on one chart, with
///   g = -lambda (dt - omega)^2 + h.
template <typename Scalar>
struct ManifoldSpec {
  std::string name;
  Domain<Scalar> domain;
  MetricField<Scalar> h;
  CovectorField<Scalar> omega;
  ScalarField<Scalar> lambda;

  int dim() const { return domain.dim(); }

  DerivativeMode derivative_mode() const {
    return h.analytic() && omega.analytic() && lambda.analytic() ? DerivativeMode::Analytic
                                                                 : DerivativeMode::FiniteDifference;
  }
};

using Spec = ManifoldSpec<double>;

/// Unit directions for boundary sampling. Planar domains get equispaced
/// angles; higher dimensions a seeded Gaussian cloud.
template <typename Scalar>
std::vector<Vec<Scalar>> sphere_directions(int dim, int count, Scalar angle_offset = Scalar(0)) {
  std::vector<Vec<Scalar>> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  if (dim == 1) {
    for (int i = 0; i < count; ++i) dirs.push_back(Vec<Scalar>::Constant(1, i % 2 == 0 ? Scalar(1) : Scalar(-1)));
    return dirs;
  }
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      const Scalar th = angle_offset + Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(i) / Scalar(count);
      Vec<Scalar> d(2);
      d << std::cos(th), std::sin(th);
      dirs.push_back(d);
    }
    return dirs;
  }
  std::mt19937_64 rng(0x5eed + static_cast<unsigned>(dim));
  std::normal_distribution<double> normal;
  for (int i = 0; i < count; ++i) {
    Vec<Scalar> d(dim);
    for (int k = 0; k < dim; ++k) d(k) = Scalar(normal(rng));
    dirs.push_back(d / d.norm());
  }
  return dirs;
}

/// Boundary point on the ray center + r * direction, found by bisection on
/// r in (0, radius) and polished with Newton along the ray.
template <typename Scalar>
Vec<Scalar> boundary_point(const Domain<Scalar>& d, const Vec<Scalar>& direction) {
  const Vec<Scalar> u = direction / direction.norm();
  auto along = [&](Scalar r) { return d.b(Vec<Scalar>(d.center + r * u)); };
  Scalar lo = 0, hi = d.radius;
  if (!(along(lo) > 0) || !(along(hi) < 0)) {
    throw Error(ErrorCode::InvalidSpec, "domain is not star-shaped about its center within its radius");
  }
  for (int it = 0; it < 200 && hi - lo > Scalar(4) * std::numeric_limits<Scalar>::epsilon() * d.radius; ++it) {
    const Scalar mid = Scalar(0.5) * (lo + hi);
    (along(mid) > 0 ? lo : hi) = mid;
  }
  Scalar r = Scalar(0.5) * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const Vec<Scalar> x = d.center + r * u;
    const Scalar slope = d.b.grad(x).dot(u);
    if (slope == Scalar(0)) break;
    const Scalar next = r - d.b(x) / slope;
    if (!(next > lo - d.radius * Scalar(1e-6) && next < hi + d.radius * Scalar(1e-6))) break;
    r = next;
  }
  return d.center + r * u;
}

template <typename Scalar>
std::vector<Vec<Scalar>> boundary_samples(const Domain<Scalar>& d, int count, Scalar angle_offset = Scalar(0)) {
  std::vector<Vec<Scalar>> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (const auto& u : sphere_directions<Scalar>(d.dim(), count, angle_offset)) pts.push_back(boundary_point(d, u));
  return pts;
}

/// Lattice points of the bounding cube (per_axis^n of them) that lie in N.
template <typename Scalar>
std::vector<Vec<Scalar>> lattice_samples(const Domain<Scalar>& d, int per_axis) {
  std::vector<Vec<Scalar>> pts;
  const int n = d.dim();
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    Vec<Scalar> x(n);
    for (int k = 0; k < n; ++k) {
      const Scalar f = per_axis == 1 ? Scalar(0.5) : Scalar(idx[static_cast<std::size_t>(k)]) / Scalar(per_axis - 1);
      x(k) = d.center(k) + d.radius * (Scalar(2) * f - Scalar(1));
    }
    if (d.b(x) >= 0) pts.push_back(x);
    int k = 0;
    while (k < n && ++idx[static_cast<std::size_t>(k)] == per_axis) idx[static_cast<std::size_t>(k++)] = 0;
    if (k == n) break;
  }
  if (pts.empty()) pts.push_back(d.center);
  return pts;
}

/// Outward h-unit normal nu_x = -h^{-1} db / |db|_{h^{-1}}. Defined wherever
/// db != 0, not only on the boundary.
template <typename Scalar>
Vec<Scalar> outward_normal(const MetricField<Scalar>& h, const Domain<Scalar>& d, const Vec<Scalar>& x) {
  const Vec<Scalar> db = d.b.grad(x);
  const Vec<Scalar> raised = h(x).ldlt().solve(db);
  const Scalar len2 = db.dot(raised);
  if (!(len2 > Scalar(1e-16))) throw Error(ErrorCode::DegenerateBoundary, "boundary defining function has vanishing gradient");
  return -raised / std::sqrt(len2);
}

/// h-orthonormal basis (as columns) of the h-orthogonal complement of `normal`.
template <typename Scalar>
Mat<Scalar> tangent_basis(const Mat<Scalar>& h, const Vec<Scalar>& normal) {
  const Eigen::Index n = normal.size();
  Mat<Scalar> basis(n, n - 1);
  std::vector<Vec<Scalar>> accepted{normal / std::sqrt(normal.dot(h * normal))};
  Eigen::Index col = 0;
  for (Eigen::Index k = 0; k < n && col < n - 1; ++k) {
    Vec<Scalar> v = Vec<Scalar>::Unit(n, k);
    for (const auto& a : accepted) v -= a.dot(h * v) * a;
    const Scalar len = std::sqrt(v.dot(h * v));
    if (len < Scalar(1e-8)) continue;
    v /= len;
    accepted.push_back(v);
    basis.col(col++) = v;
  }
  return basis;
}

struct ValidationOptions {
  int lattice_per_axis = 10;
  int boundary_samples = 200;
};

/// Samples the spec invariants: h symmetric positive definite and lambda > 0
/// on N, and |db| bounded away from zero on the boundary.
template <typename Scalar>
void validate(const ManifoldSpec<Scalar>& spec, const ValidationOptions& opts = {}) {
  const auto& d = spec.domain;
  std::vector<Vec<Scalar>> pts = lattice_samples(d, opts.lattice_per_axis);
  const auto bdry = boundary_samples(d, opts.boundary_samples);
  pts.insert(pts.end(), bdry.begin(), bdry.end());
  for (const auto& x : pts) {
    const Mat<Scalar> h = spec.h(x);
    if (h.rows() != spec.dim() || h.cols() != spec.dim()) throw Error(ErrorCode::InvalidSpec, "h has wrong shape");
    if ((h - h.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * (Scalar(1) + h.cwiseAbs().maxCoeff())) {
      throw Error(ErrorCode::InvalidSpec, "h is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> eig(h, Eigen::EigenvaluesOnly);
    if (!(eig.eigenvalues().minCoeff() > 0)) throw Error(ErrorCode::InvalidSpec, "h is not positive definite");
    if (!(spec.lambda(x) > 0)) throw Error(ErrorCode::NonLorentzian, "lambda <= 0 at a sampled point");
    if (spec.omega(x).size() != spec.dim()) throw Error(ErrorCode::InvalidSpec, "omega has wrong size");
  }
  for (const auto& x : bdry) {
    if (!(d.b.grad(x).norm() > Scalar(1e-8))) throw Error(ErrorCode::DegenerateBoundary, "|db| vanishes on the boundary");
  }
}

/// Input of convert_tilde: g = -lambda dt^2 + 2 w~_i dt dx^i + h~_ij dx^i dx^j.
template <typename Scalar>
struct TildeSpec {
  std::string name;
  Domain<Scalar> domain;
  MetricField<Scalar> h_tilde;
  CovectorField<Scalar> omega_tilde;
  ScalarField<Scalar> lambda;
};

/// h = h~ + w~ (x) w~ / lambda, omega = w~ / lambda. Derivatives are carried
/// through analytically when the inputs have them.
template <typename Scalar>
ManifoldSpec<Scalar> convert_tilde(const TildeSpec<Scalar>& in) {
  const auto ht = in.h_tilde;
  const auto wt = in.omega_tilde;
  const auto lam = in.lambda;
  const bool analytic = ht.analytic() && wt.analytic() && lam.analytic();

  MetricField<Scalar> h;
  h.value = [ht, wt, lam](const Vec<Scalar>& x) {
    const Vec<Scalar> w = wt(x);
    return Mat<Scalar>(ht(x) + w * w.transpose() / lam(x));
  };
  CovectorField<Scalar> omega;
  omega.value = [wt, lam](const Vec<Scalar>& x) { return Vec<Scalar>(wt(x) / lam(x)); };
  if (analytic) {
    h.derivative = [ht, wt, lam](const Vec<Scalar>& x) {
      auto d = ht.partials(x);
      const Vec<Scalar> w = wt(x);
      const Mat<Scalar> jw = wt.jac(x);
      const Scalar l = lam(x);
      const Vec<Scalar> dl = lam.grad(x);
      for (std::size_t k = 0; k < d.size(); ++k) {
        const Vec<Scalar> dw = jw.row(static_cast<Eigen::Index>(k)).transpose();
        d[k] += (dw * w.transpose() + w * dw.transpose()) / l - w * w.transpose() * dl(static_cast<Eigen::Index>(k)) / (l * l);
      }
      return d;
    };
    omega.jacobian = [wt, lam](const Vec<Scalar>& x) {
      const Scalar l = lam(x);
      return Mat<Scalar>(wt.jac(x) / l - lam.grad(x) * wt(x).transpose() / (l * l));
    };
  }
  ManifoldSpec<Scalar> out{in.name, in.domain, h, omega, lam};
  validate(out);
  return out;
}

}  // namespace stationary
