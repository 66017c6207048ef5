#include "stationary/ode.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stationary {

namespace {

using OdeState = std::vector<double>;

Vector to_eigen(const OdeState& v) { return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())); }

OdeState to_std(const Vector& v) { return OdeState(v.data(), v.data() + v.size()); }

std::vector<double> lobatto_nodes(int degree) {
  std::vector<double> nodes(static_cast<std::size_t>(degree));
  for (int j = 1; j <= degree; ++j) nodes[static_cast<std::size_t>(j - 1)] = 0.5 * (1.0 - std::cos(std::numbers::pi * j / degree));
  return nodes;
}

}  // namespace

Vector Segment::at(double theta) const {
  Vector y = y0;
  double p = theta;
  for (Eigen::Index k = 0; k < coeffs.cols(); ++k, p *= theta) y += p * coeffs.col(k);
  return y;
}

Vector Segment::slope(double theta) const {
  Vector d = Vector::Zero(y0.size());
  double p = 1.0;
  for (Eigen::Index k = 0; k < coeffs.cols(); ++k, p *= theta) d += double(k + 1) * p * coeffs.col(k);
  return d / length;
}

Segment fit_segment(double s0, double length, int degree, const std::function<Vector(double)>& f) {
  const auto nodes = lobatto_nodes(degree);
  Matrix vander(degree, degree);
  for (int j = 0; j < degree; ++j) {
    double p = nodes[static_cast<std::size_t>(j)];
    for (int k = 0; k < degree; ++k, p *= nodes[static_cast<std::size_t>(j)]) vander(j, k) = p;
  }
  Segment seg;
  seg.s0 = s0;
  seg.length = length;
  seg.y0 = f(0.0);
  Matrix rhs(degree, seg.y0.size());
  for (int j = 0; j < degree; ++j) rhs.row(j) = (f(nodes[static_cast<std::size_t>(j)]) - seg.y0).transpose();
  seg.coeffs = vander.partialPivLu().solve(rhs).transpose();
  return seg;
}

void DenseTrajectory::append(Segment seg) { segments_.push_back(std::move(seg)); }

double DenseTrajectory::begin() const { return segments_.front().s0; }
double DenseTrajectory::end() const { return segments_.back().s1(); }
Eigen::Index DenseTrajectory::state_size() const { return segments_.front().y0.size(); }

int DenseTrajectory::max_degree() const {
  int d = 1;
  for (const auto& seg : segments_) d = std::max(d, seg.degree());
  return d;
}

std::size_t DenseTrajectory::locate(double s) const {
  if (segments_.empty()) throw Error(ErrorCode::InvalidSpec, "empty trajectory");
  auto it = std::upper_bound(segments_.begin(), segments_.end(), s, [](double v, const Segment& seg) { return v < seg.s0; });
  if (it == segments_.begin()) return 0;
  return static_cast<std::size_t>(std::distance(segments_.begin(), it) - 1);
}

Vector DenseTrajectory::operator()(double s) const {
  const auto& seg = segments_[locate(s)];
  return seg.length == 0 ? seg.y0 : seg.at((s - seg.s0) / seg.length);
}

Vector DenseTrajectory::derivative(double s) const {
  const auto& seg = segments_[locate(s)];
  return seg.slope(seg.length == 0 ? 0.0 : (s - seg.s0) / seg.length);
}

std::vector<double> DenseTrajectory::knots() const {
  std::vector<double> k;
  k.reserve(segments_.size() + 1);
  for (const auto& seg : segments_) k.push_back(seg.s0);
  if (!segments_.empty()) k.push_back(end());
  return k;
}

void DenseTrajectory::shift_component(Eigen::Index i, double delta) {
  for (auto& seg : segments_) seg.y0(i) += delta;
}

DenseTrajectory DenseTrajectory::rows(Eigen::Index start, Eigen::Index count) const {
  DenseTrajectory out;
  for (const auto& seg : segments_) {
    Segment s = seg;
    s.y0 = seg.y0.segment(start, count);
    s.coeffs = seg.coeffs.middleRows(start, count);
    out.append(std::move(s));
  }
  return out;
}

DenseTrajectory DenseTrajectory::remap(double a, double b, int degree,
                                       const std::function<Vector(double, const Vector&)>& g) const {
  // new parameter tau with s = a * tau + b
  DenseTrajectory out;
  const auto emit = [&](const Segment& seg) {
    const double t_start = a > 0 ? (seg.s0 - b) / a : (seg.s1() - b) / a;
    const double t_len = seg.length / std::abs(a);
    out.append(fit_segment(t_start, t_len, degree, [&](double theta) {
      const double tau = t_start + theta * t_len;
      const double th = a > 0 ? theta : 1.0 - theta;
      return g(tau, seg.at(th));
    }));
  };
  if (a > 0) {
    for (const auto& seg : segments_) emit(seg);
  } else {
    for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) emit(*it);
  }
  return out;
}

double integrate_along(const DenseTrajectory& traj, const std::function<double(double, const Vector&)>& f) {
  double total = 0;
  for (const auto& seg : traj.segments()) {
    if (seg.length == 0) continue;
    total += boost::math::quadrature::gauss<double, 10>::integrate(
        [&](double theta) { return f(seg.s0 + theta * seg.length, seg.at(theta)); }, 0.0, 1.0) *
             seg.length;
  }
  return total;
}

OdeResult integrate_ode(const OdeRhs& rhs, const Vector& y0, double s0, double s1, const Tolerances& tol,
                        const EventFn& event, double event_tolerance) {
  namespace odeint = boost::numeric::odeint;
  if (!y0.allFinite()) throw Error(ErrorCode::NonFiniteState, "initial state is not finite");

  OdeResult result;
  const auto n = y0.size();
  if (!(s1 > s0)) {
    Segment seg{s0, 0.0, y0, Matrix::Zero(n, 1)};
    result.path.append(seg);
    return result;
  }

  Vector ybuf(n), dybuf(n);
  auto system = [&](const OdeState& y, OdeState& dy, double) {
    ybuf = to_eigen(y);
    rhs(ybuf, dybuf);
    dy.assign(dybuf.data(), dybuf.data() + n);
  };

  auto stepper = odeint::make_dense_output(tol.atol, tol.rtol, odeint::runge_kutta_dopri5<OdeState>());
  const double span = s1 - s0;
  stepper.initialize(to_std(y0), s0, std::min(1e-3, 1e-3 * span));

  OdeState tmp(static_cast<std::size_t>(n));
  auto state_at = [&](double s) {
    stepper.calc_state(s, tmp);
    return to_eigen(tmp);
  };

  double g_prev = event ? event(y0) : 0.0;
  constexpr int kDegree = 5;  // the Dormand-Prince continuous extension is quintic in theta
  constexpr long kMaxSteps = 2'000'000;

  for (long step = 0;; ++step) {
    if (step > kMaxSteps) throw Error(ErrorCode::StepSizeUnderflow, "step budget exhausted");
    std::pair<double, double> span_step;
    try {
      span_step = stepper.do_step(system);
    } catch (const odeint::step_adjustment_error& e) {
      throw Error(ErrorCode::StepSizeUnderflow, e.what());
    }
    const auto [a, b_raw] = span_step;
    if (!(b_raw - a > 1e-14 * (1.0 + std::abs(a)))) throw Error(ErrorCode::StepSizeUnderflow, "step size underflow");
    double b = std::min(b_raw, s1);
    Vector y_end = state_at(b);
    if (!y_end.allFinite()) throw Error(ErrorCode::NonFiniteState, "integration produced a non-finite state");

    bool stop = b >= s1;
    if (event) {
      const double g_end = event(y_end);
      if (g_end < 0) {
        double root = a;
        if (g_prev >= 0) {
          auto g = [&](double s) { return event(state_at(s)); };
          std::uintmax_t iters = 200;
          auto bracket = boost::math::tools::toms748_solve(
              g, a, b, g_prev, g_end,
              [&](double lo, double hi) { return hi - lo <= 1e-15 * (1.0 + std::abs(hi)); }, iters);
          // prefer the end of the bracket that meets the event tolerance
          root = std::abs(g(bracket.first)) <= std::abs(g(bracket.second)) ? bracket.first : bracket.second;
          if (std::abs(g(root)) > event_tolerance) root = 0.5 * (bracket.first + bracket.second);
        }
        b = root;
        stop = true;
        result.event_hit = true;
      } else {
        g_prev = g_end;
      }
    }
    if (b > a) {
      const double len = b - a;
      result.path.append(fit_segment(a, len, kDegree, [&](double theta) { return state_at(a + theta * len); }));
    } else if (result.path.empty()) {
      result.path.append(Segment{a, 0.0, state_at(a), Matrix::Zero(n, 1)});
    }
    if (stop) break;
  }
  return result;
}

}  // namespace stationary
