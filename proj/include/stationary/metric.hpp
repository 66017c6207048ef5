#pragma once

// Pointwise metric algebra of g = -lambda (dt - omega)^2 + h. Index 0 of
// every spacetime object is t; spatial indices are shifted by one.

#include "stationary/manifold.hpp"

namespace stationary {

template <typename Scalar>
struct LorentzMetricValue {
  Mat<Scalar> g;
  Mat<Scalar> g_inv;
  bool lorentzian = false;  // exactly one negative eigenvalue
};

/// Christoffel symbols Gamma^l_{ij}, stored as one symmetric matrix per
/// upper index.
template <typename Scalar>
struct Christoffel {
  std::vector<Mat<Scalar>> upper;

  Scalar operator()(Eigen::Index l, Eigen::Index i, Eigen::Index j) const {
    return upper[static_cast<std::size_t>(l)](i, j);
  }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(upper.size()); }

  /// Gamma(u, w)^l = Gamma^l_{ij} u^i w^j.
  Vec<Scalar> contract(const Vec<Scalar>& u, const Vec<Scalar>& w) const {
    Vec<Scalar> r(dim());
    for (Eigen::Index l = 0; l < dim(); ++l) r(l) = u.dot(upper[static_cast<std::size_t>(l)] * w);
    return r;
  }
};

/// Everything the closed forms need at one point.
template <typename Scalar>
struct LocalFields {
  Mat<Scalar> h, h_inv;
  std::vector<Mat<Scalar>> dh;
  Vec<Scalar> omega;
  Mat<Scalar> domega;  // (k, i) = d_k omega_i
  Scalar lambda{};
  Vec<Scalar> dlambda;
};

template <typename Scalar>
Mat<Scalar> checked_inverse(const Mat<Scalar>& h) {
  Eigen::LLT<Mat<Scalar>> llt(h);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::DegenerateMetric, "h is not invertible");
  return llt.solve(Mat<Scalar>::Identity(h.rows(), h.cols()));
}

template <typename Scalar>
LocalFields<Scalar> local_fields(const ManifoldSpec<Scalar>& spec, const Vec<Scalar>& x) {
  LocalFields<Scalar> f;
  f.h = spec.h(x);
  f.h_inv = checked_inverse(f.h);
  f.dh = spec.h.partials(x);
  f.omega = spec.omega(x);
  f.domega = spec.omega.jac(x);
  f.lambda = spec.lambda(x);
  f.dlambda = spec.lambda.grad(x);
  return f;
}

template <typename Scalar>
void require_in_domain(const Domain<Scalar>& d, const Vec<Scalar>& x) {
  if (!in_domain(d, x)) throw Error(ErrorCode::OutOfDomain, "point lies outside N");
}

/// g and its inverse from the block formulas. No domain check.
template <typename Scalar>
LorentzMetricValue<Scalar> metric_blocks(const Mat<Scalar>& h, const Vec<Scalar>& omega, Scalar lambda) {
  if (!(lambda > 0)) throw Error(ErrorCode::NonLorentzian, "lambda must be strictly positive");
  const Eigen::Index n = h.rows();
  LorentzMetricValue<Scalar> out;
  out.g.resize(n + 1, n + 1);
  out.g(0, 0) = -lambda;
  out.g.block(0, 1, 1, n) = lambda * omega.transpose();
  out.g.block(1, 0, n, 1) = lambda * omega;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) out.g(i + 1, j + 1) = out.g(j + 1, i + 1) = h(i, j) - lambda * omega(i) * omega(j);

  const Mat<Scalar> h_inv = checked_inverse(h);
  const Vec<Scalar> raised = h_inv * omega;
  out.g_inv.resize(n + 1, n + 1);
  out.g_inv(0, 0) = Scalar(-1) / lambda + omega.dot(raised);
  out.g_inv.block(0, 1, 1, n) = raised.transpose();
  out.g_inv.block(1, 0, n, 1) = raised;
  out.g_inv.block(1, 1, n, n) = h_inv;

  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> eig(out.g, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  out.lorentzian = ev(0) < 0 && (n == 0 || ev(1) > 0);
  return out;
}

template <typename Scalar>
LorentzMetricValue<Scalar> assemble_g(const ManifoldSpec<Scalar>& spec, const Vec<Scalar>& x) {
  require_in_domain(spec.domain, x);
  return metric_blocks<Scalar>(spec.h(x), spec.omega(x), spec.lambda(x));
}

/// The (lambda, omega~, h~) presentation of the same metric.
template <typename Scalar>
Mat<Scalar> assemble_g_tilde(const TildeSpec<Scalar>& spec, const Vec<Scalar>& x) {
  const Eigen::Index n = x.size();
  Mat<Scalar> g(n + 1, n + 1);
  const Vec<Scalar> w = spec.omega_tilde(x);
  g(0, 0) = -spec.lambda(x);
  g.block(0, 1, 1, n) = w.transpose();
  g.block(1, 0, n, 1) = w;
  g.block(1, 1, n, n) = spec.h_tilde(x);
  return g;
}

template <typename Scalar>
Christoffel<Scalar> christoffel_from(const Mat<Scalar>& h_inv, const std::vector<Mat<Scalar>>& dh) {
  const Eigen::Index n = h_inv.rows();
  // first kind: [ij, m] = 1/2 (d_i h_mj + d_j h_mi - d_m h_ij)
  std::vector<Mat<Scalar>> first(static_cast<std::size_t>(n), Mat<Scalar>(n, n));
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j) {
        const Scalar v = Scalar(0.5) * (dh[static_cast<std::size_t>(i)](m, j) + dh[static_cast<std::size_t>(j)](m, i) -
                                        dh[static_cast<std::size_t>(m)](i, j));
        first[static_cast<std::size_t>(m)](i, j) = first[static_cast<std::size_t>(m)](j, i) = v;
      }
  Christoffel<Scalar> gamma;
  gamma.upper.assign(static_cast<std::size_t>(n), Mat<Scalar>::Zero(n, n));
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index m = 0; m < n; ++m) gamma.upper[static_cast<std::size_t>(l)] += h_inv(l, m) * first[static_cast<std::size_t>(m)];
  return gamma;
}

/// Levi-Civita symbols of a Riemannian metric field.
template <typename Scalar>
Christoffel<Scalar> christoffel_h(const MetricField<Scalar>& h, const Vec<Scalar>& x) {
  return christoffel_from<Scalar>(checked_inverse<Scalar>(h(x)), h.partials(x));
}

template <typename Scalar>
Christoffel<Scalar> christoffel_h(const ManifoldSpec<Scalar>& spec, const Vec<Scalar>& x) {
  require_in_domain(spec.domain, x);
  return christoffel_h(spec.h, x);
}

/// Closed-form Christoffel symbols of g in terms of (h, omega, lambda) and
/// their first partials. Indices run over 0..n with 0 = t.
template <typename Scalar>
Christoffel<Scalar> christoffel_g_closed(const LocalFields<Scalar>& f) {
  const Eigen::Index n = f.h.rows();
  const auto& w = f.omega;
  const auto& J = f.domega;
  const auto& dl = f.dlambda;
  const Scalar lam = f.lambda;
  const Vec<Scalar> w_up = f.h_inv * w;
  const Scalar w2 = w.dot(w_up);
  const Christoffel<Scalar> gh = christoffel_from(f.h_inv, f.dh);

  // dlw(k, i) = d_k (lambda w_i)
  const Mat<Scalar> dlw = dl * w.transpose() + lam * J;
  // curl(i, m) = d_i(lambda w_m) - d_m(lambda w_i)
  const Mat<Scalar> curl = dlw - dlw.transpose();
  // sym(i, j) = d_j(lambda w_i) + d_i(lambda w_j)
  const Mat<Scalar> sym = dlw + dlw.transpose();
  // d_k(lambda w_m w_i)
  auto dlww = [&](Eigen::Index k, Eigen::Index m, Eigen::Index i) {
    return dl(k) * w(m) * w(i) + lam * (J(k, m) * w(i) + w(m) * J(k, i));
  };
  // quad[m](i, j) = d_j(lambda w_m w_i) + d_i(lambda w_m w_j) - d_m(lambda w_i w_j)
  std::vector<Mat<Scalar>> quad(static_cast<std::size_t>(n), Mat<Scalar>(n, n));
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) quad[static_cast<std::size_t>(m)](i, j) = dlww(j, m, i) + dlww(i, m, j) - dlww(m, i, j);

  Christoffel<Scalar> G;
  G.upper.assign(static_cast<std::size_t>(n + 1), Mat<Scalar>::Zero(n + 1, n + 1));

  // time component
  auto& G0 = G.upper[0];
  G0(0, 0) = Scalar(0.5) * w_up.dot(dl);
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar v = dl(i) / (Scalar(2) * lam) - Scalar(0.5) * w2 * dl(i);
    for (Eigen::Index m = 0; m < n; ++m) v += Scalar(0.5) * w_up(m) * curl(i, m);
    G0(i + 1, 0) = G0(0, i + 1) = v;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      Scalar v = Scalar(0.5) * (w2 - Scalar(1) / lam) * sym(i, j);
      for (Eigen::Index s = 0; s < n; ++s) v += w(s) * gh(s, i, j);
      for (Eigen::Index m = 0; m < n; ++m) v -= Scalar(0.5) * w_up(m) * quad[static_cast<std::size_t>(m)](i, j);
      G0(i + 1, j + 1) = G0(j + 1, i + 1) = v;
    }

  // spatial components
  const Vec<Scalar> grad_l = f.h_inv * dl;
  for (Eigen::Index l = 0; l < n; ++l) {
    auto& Gl = G.upper[static_cast<std::size_t>(l + 1)];
    Gl(0, 0) = Scalar(0.5) * grad_l(l);
    for (Eigen::Index i = 0; i < n; ++i) {
      Scalar v = -Scalar(0.5) * w_up(l) * dl(i);
      for (Eigen::Index m = 0; m < n; ++m) v += Scalar(0.5) * f.h_inv(l, m) * curl(i, m);
      Gl(i + 1, 0) = Gl(0, i + 1) = v;
    }
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j) {
        Scalar v = Scalar(0.5) * w_up(l) * sym(i, j) + gh(l, i, j);
        for (Eigen::Index m = 0; m < n; ++m) v -= Scalar(0.5) * f.h_inv(l, m) * quad[static_cast<std::size_t>(m)](i, j);
        Gl(i + 1, j + 1) = Gl(j + 1, i + 1) = v;
      }
  }
  return G;
}

template <typename Scalar>
Christoffel<Scalar> christoffel_g(const ManifoldSpec<Scalar>& spec, const Vec<Scalar>& x) {
  require_in_domain(spec.domain, x);
  if (!(spec.lambda(x) > 0)) throw Error(ErrorCode::NonLorentzian, "lambda must be strictly positive");
  return christoffel_g_closed(local_fields(spec, x));
}

}  // namespace stationary
