#pragma once

#include "stationary/types.hpp"

#include <cmath>
#include <functional>

namespace stationary {

/// Relative step for central differences on user fields: 1e-5 * (1 + |x|).
template <typename Scalar>
Scalar fd_step(const Vec<Scalar>& x) {
  return Scalar(1e-5) * (Scalar(1) + x.norm());
}

/// Central-difference partials of a vector-valued map. Column k is d/dx^k.
template <typename Scalar, typename F>
auto central_jacobian(const F& f, const Vec<Scalar>& x, Scalar step) {
  using Out = std::decay_t<decltype(f(x))>;
  std::vector<Out> partials;
  partials.reserve(static_cast<std::size_t>(x.size()));
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vec<Scalar> xp = x, xm = x;
    xp(k) += step;
    xm(k) -= step;
    partials.push_back((f(xp) - f(xm)) / (Scalar(2) * step));
  }
  return partials;
}

/// Fourth-order central difference of f along direction u, used for derived
/// fields (normals) where the extra accuracy is needed.
template <typename Scalar, typename F>
auto directional_derivative4(const F& f, const Vec<Scalar>& x, const Vec<Scalar>& u, Scalar step) {
  auto a = f(Vec<Scalar>(x + step * u));
  auto b = f(Vec<Scalar>(x - step * u));
  auto c = f(Vec<Scalar>(x + Scalar(2) * step * u));
  auto d = f(Vec<Scalar>(x - Scalar(2) * step * u));
  using Out = std::decay_t<decltype(a)>;
  Out r = (Scalar(8) * (a - b) - (c - d)) / (Scalar(12) * step);
  return r;
}

template <typename Scalar>
struct ScalarField {
  std::function<Scalar(const Vec<Scalar>&)> value;
  std::function<Vec<Scalar>(const Vec<Scalar>&)> gradient;  // empty: finite differences

  Scalar operator()(const Vec<Scalar>& x) const { return value(x); }

  Vec<Scalar> grad(const Vec<Scalar>& x) const {
    if (gradient) return gradient(x);
    Vec<Scalar> g(x.size());
    const Scalar step = fd_step(x);
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      Vec<Scalar> xp = x, xm = x;
      xp(k) += step;
      xm(k) -= step;
      g(k) = (value(xp) - value(xm)) / (Scalar(2) * step);
    }
    return g;
  }

  bool analytic() const { return static_cast<bool>(gradient); }
};

/// A 1-form. jacobian(x)(k, i) = d_k w_i.
template <typename Scalar>
struct CovectorField {
  std::function<Vec<Scalar>(const Vec<Scalar>&)> value;
  std::function<Mat<Scalar>(const Vec<Scalar>&)> jacobian;

  Vec<Scalar> operator()(const Vec<Scalar>& x) const { return value(x); }

  Mat<Scalar> jac(const Vec<Scalar>& x) const {
    if (jacobian) return jacobian(x);
    auto cols = central_jacobian(value, x, fd_step(x));
    Mat<Scalar> j(x.size(), x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) j.row(k) = cols[static_cast<std::size_t>(k)].transpose();
    return j;
  }

  /// Exterior derivative, (dw)_{ij} = d_i w_j - d_j w_i.
  Mat<Scalar> exterior(const Vec<Scalar>& x) const {
    Mat<Scalar> j = jac(x);
    return j - j.transpose();
  }

  bool analytic() const { return static_cast<bool>(jacobian); }
};

/// A symmetric 2-tensor field. derivative(x)[k] = d_k h.
template <typename Scalar>
struct MetricField {
  std::function<Mat<Scalar>(const Vec<Scalar>&)> value;
  std::function<std::vector<Mat<Scalar>>(const Vec<Scalar>&)> derivative;

  Mat<Scalar> operator()(const Vec<Scalar>& x) const { return value(x); }

  std::vector<Mat<Scalar>> partials(const Vec<Scalar>& x) const {
    if (derivative) return derivative(x);
    return central_jacobian(value, x, fd_step(x));
  }

  bool analytic() const { return static_cast<bool>(derivative); }
};

template <typename Scalar>
ScalarField<Scalar> constant_scalar(int dim, Scalar c) {
  return {[c](const Vec<Scalar>&) { return c; },
          [dim](const Vec<Scalar>&) { return Vec<Scalar>::Zero(dim).eval(); }};
}

template <typename Scalar>
CovectorField<Scalar> zero_covector(int dim) {
  return {[dim](const Vec<Scalar>&) { return Vec<Scalar>::Zero(dim).eval(); },
          [dim](const Vec<Scalar>&) { return Mat<Scalar>::Zero(dim, dim).eval(); }};
}

template <typename Scalar>
MetricField<Scalar> euclidean_metric(int dim) {
  return {[dim](const Vec<Scalar>&) { return Mat<Scalar>::Identity(dim, dim).eval(); },
          [dim](const Vec<Scalar>&) {
            return std::vector<Mat<Scalar>>(static_cast<std::size_t>(dim), Mat<Scalar>::Zero(dim, dim));
          }};
}

}  // namespace stationary
