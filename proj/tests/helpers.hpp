#pragma once

#include "stationary/flow.hpp"

#include <cmath>

namespace testing_helpers {

using namespace stationary;

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

/// Mass-m, momentum-rho state at x moving along `dir`.
inline SpacetimeState timelike_state(const Spec& spec, const Vector& x, const Vector& dir, double rho, double m, double t = 0) {
  const double lam = spec.lambda(x);
  const double speed = std::sqrt(rho * rho / lam - m * m);
  const Vector vx = dir * (speed / std::sqrt(dir.dot(spec.h(x) * dir)));
  return {t, x, -rho / lam + spec.omega(x).dot(vx), vx, 0.0};
}

}  // namespace testing_helpers
