#pragma once

// Adaptive Dormand-Prince 5(4) integration with a piecewise-polynomial dense
// output and boundary event location. The stepping itself is Boost.Odeint;
// this layer turns each accepted step into an explicit polynomial so that
// trajectories can be sliced, reparametrized and integrated against.

#include "stationary/types.hpp"

#include <functional>
#include <optional>

namespace stationary {

struct Tolerances {
  double rtol = 1e-10;
  double atol = 1e-10;
};

/// One accepted step: y(s0 + theta * length) = y0 + coeffs * [theta, ..., theta^d].
struct Segment {
  double s0 = 0;
  double length = 0;
  Vector y0;
  Matrix coeffs;

  double s1() const { return s0 + length; }
  int degree() const { return static_cast<int>(coeffs.cols()); }
  Vector at(double theta) const;
  Vector slope(double theta) const;  // dy/ds
};

/// Fits a segment to f(theta) on [0, 1] by interpolation at `degree`
/// Chebyshev-Lobatto nodes plus theta = 0. Exact for polynomials of that
/// degree.
Segment fit_segment(double s0, double length, int degree, const std::function<Vector(double)>& f);

class DenseTrajectory {
 public:
  void append(Segment seg);

  bool empty() const { return segments_.empty(); }
  double begin() const;
  double end() const;
  Eigen::Index state_size() const;
  int max_degree() const;

  Vector operator()(double s) const;
  Vector derivative(double s) const;
  Vector front() const { return (*this)(begin()); }
  Vector back() const { return (*this)(end()); }

  const std::vector<Segment>& segments() const { return segments_; }
  /// Accepted step boundaries, begin() through end().
  std::vector<double> knots() const;

  /// Adds delta to component i of every point.
  void shift_component(Eigen::Index i, double delta);

  /// Rows [start, start + count) of the state as their own trajectory.
  DenseTrajectory rows(Eigen::Index start, Eigen::Index count) const;

  /// Rebuilds every segment from g(s, y(s)) with the given polynomial degree
  /// and parameter map s -> a * s + b (a may be negative).
  DenseTrajectory remap(double a, double b, int degree, const std::function<Vector(double, const Vector&)>& g) const;

 private:
  std::size_t locate(double s) const;
  std::vector<Segment> segments_;
};

/// Integral of f(s, y(s)) over the trajectory, Gauss-Legendre per segment.
double integrate_along(const DenseTrajectory& traj, const std::function<double(double, const Vector&)>& f);

using OdeRhs = std::function<void(const Vector& y, Vector& dy)>;
using EventFn = std::function<double(const Vector& y)>;

struct OdeResult {
  DenseTrajectory path;
  bool event_hit = false;  // stopped on the event rather than the horizon
};

/// Integrates y' = rhs(y) on [s0, s1]. With an event, integration stops at
/// the first crossing of event(y) from >= 0 to < 0, located to |event| <=
/// event_tolerance on the dense output.
OdeResult integrate_ode(const OdeRhs& rhs, const Vector& y0, double s0, double s1, const Tolerances& tol,
                        const EventFn& event = {}, double event_tolerance = 1e-10);

}  // namespace stationary
