#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "stationary/gallery.hpp"
#include "stationary/gauge.hpp"

using namespace stationary;
using testing_helpers::vec;

namespace {

Matrix rotation_generator() {
  Matrix R(2, 2);
  R << 0, -1, 1, 0;
  return R;
}

/// f moves the interior, phi = b (0.3 + 0.2 x - 0.1 y^2), mu = exp(mu_scale b).
GaugeTransform sample_gauge(const Domain<double>& d, double mu_scale = 0.0, double q_scale = 1.0) {
  GaugeParams p;
  p.epsilon = 0.15;
  p.shift = vec({0.2, -0.1});
  p.rotation = 0.5 * rotation_generator();
  p.q = Expr<double>::constant(0.3 * q_scale) + Expr<double>::monomial(0.2 * q_scale, {1, 0}) +
        Expr<double>::monomial(-0.1 * q_scale, {0, 2});
  p.mu_scale = mu_scale;
  return boundary_fixing_gauge(d, p);
}

GaugeTransform second_gauge(const Domain<double>& d) {
  GaugeParams p;
  p.epsilon = -0.1;
  p.shift = vec({-0.1, 0.25});
  p.q = Expr<double>::monomial(0.4, {0, 1});
  p.mu_scale = 0.2;
  return boundary_fixing_gauge(d, p);
}

struct FieldGap {
  double h = 0, omega = 0, lambda = 0;
  double worst() const { return std::max({h, omega, lambda}); }
};

FieldGap field_gap(const Spec& a, const Spec& b, int seed = 1, int count = 200) {
  std::mt19937_64 rng(seed);
  FieldGap g;
  for (int i = 0; i < count; ++i) {
    const Vector x = oracle::random_disk_point(rng);
    g.h = std::max(g.h, (a.h(x) - b.h(x)).cwiseAbs().maxCoeff());
    g.omega = std::max(g.omega, (a.omega(x) - b.omega(x)).cwiseAbs().maxCoeff());
    g.lambda = std::max(g.lambda, std::abs(a.lambda(x) - b.lambda(x)));
  }
  return g;
}

/// lambda multiplied by 1 + 0.1 b: same boundary traces, different interior.
Spec perturbed_lapse(const Spec& s) {
  Spec out = s;
  const auto lam = s.lambda;
  const auto b = s.domain.b;
  out.lambda = ScalarField<double>{[lam, b](const Vector& x) { return lam(x) * (1.0 + 0.1 * b(x)); }, {}};
  return out;
}

}  // namespace

TEST_CASE("gauge validity") {
  const auto d = unit_ball<double>(2);
  CHECK_NOTHROW(validate_gauge(sample_gauge(d, 0.3), d));
  CHECK_NOTHROW(validate_gauge(GaugeTransform::identity(2), d));
  GaugeTransform bad = GaugeTransform::identity(2);
  bad.phi = constant_scalar<double>(2, 0.1);
  CHECK_THROWS_AS(validate_gauge(bad, d), Error);
  bad = GaugeTransform::identity(2);
  bad.f = [](const Vector& x) { return Vector(0.9 * x); };
  CHECK_THROWS_AS(validate_gauge(bad, d), Error);
}

TEST_CASE("spacetime gauge action") {
  const Spec s = rotating_disk(0.2);
  SUBCASE("identity leaves the fields unchanged") {
    const Spec out = apply_gauge_ssm(s, GaugeTransform::identity(2), -2.0, 1.0);
    CHECK(field_gap(s, out).worst() == 0.0);
  }
  SUBCASE("phi-only gauge shifts omega by d(phi / rho)") {
    GaugeParams p;
    p.q = Expr<double>::constant(1.0) + Expr<double>::monomial(-1.0, {2, 0}) + Expr<double>::monomial(-1.0, {0, 2});
    const double rho = -2.5;
    const Spec out = apply_gauge_ssm(s, boundary_fixing_gauge(s.domain, p), rho, 1.0);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
      const Vector x = oracle::random_disk_point(rng);
      // phi = (1 - |x|^2)^2, d phi = -4 (1 - |x|^2) x
      const Vector dphi = -4.0 * (1.0 - x.squaredNorm()) * x;
      CHECK((out.omega(x) - s.omega(x) - dphi / rho).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((out.h(x) - s.h(x)).cwiseAbs().maxCoeff() == 0.0);
      CHECK(out.lambda(x) == s.lambda(x));
    }
  }
  SUBCASE("pullback formulas against direct evaluation") {
    const double rho = -3.0, m = 1.0;
    const auto g = sample_gauge(s.domain, 0.3);
    const Spec out = apply_gauge_ssm(s, g, rho, m);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
      const Vector x = oracle::random_disk_point(rng);
      const Vector y = g.f(x);
      // Jacobian of f by central differences as an independent check
      Matrix J(2, 2);
      for (int j = 0; j < 2; ++j) {
        Vector e = Vector::Zero(2);
        e(j) = 1e-6;
        J.col(j) = (g.f(x + e) - g.f(x - e)) / 2e-6;
      }
      const double mu = g.mu(x);
      CHECK((out.h(x) - J.transpose() * s.h(y) * J / mu).cwiseAbs().maxCoeff() <= 1e-8);
      const double inv = mu * (1 / s.lambda(y) - m * m / (rho * rho)) + m * m / (rho * rho);
      CHECK(std::abs(out.lambda(x) - 1 / inv) <= 1e-12);
    }
  }
  SUBCASE("boundary traces are preserved") {
    const Spec out = apply_gauge_ssm(s, sample_gauge(s.domain, 0.3), -3.0, 1.0);
    CHECK(compare_boundary_traces(s, out).worst() <= 1e-10);
  }
  SUBCASE("successive gauges equal the composed gauge") {
    const auto g1 = sample_gauge(s.domain, 0.3), g2 = second_gauge(s.domain);
    const double rho = -3.0, m = 1.0;
    const Spec twice = apply_gauge_ssm(apply_gauge_ssm(s, g1, rho, m), g2, rho, m);
    const Spec once = apply_gauge_ssm(s, compose(g1, g2), rho, m);
    CHECK(field_gap(twice, once).worst() <= 1e-9);
  }
  SUBCASE("a gauge that breaks the signature is rejected") {
    // large mu with mass: 1/lambda' turns negative once mu (1/lambda - m^2/rho^2) < -m^2/rho^2
    GaugeTransform g = GaugeTransform::identity(2);
    Spec slow = flat_disk();
    slow.lambda = constant_scalar<double>(2, 3.0);
    const auto b = slow.domain.b;
    g.mu = ScalarField<double>{[b](const Vector& x) { return 1.0 + 20.0 * b(x); }, {}};
    try {
      apply_gauge_ssm(slow, g, -1.0, 1.0);
      FAIL("expected GaugeBreaksSignature");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::GaugeBreaksSignature);
    }
  }
}

TEST_CASE("MP gauge action") {
  const Spec s = bumpy_lambda(0.5);
  const double rho = -3.0, m = 1.0, k = -0.5 * m * m;
  const auto sys = reduce(s, rho, m);
  SUBCASE("identity") {
    const auto out = apply_gauge_mp(sys, GaugeTransform::identity(2), k);
    const Vector x = vec({0.3, -0.2});
    CHECK((out.h(x) - sys.h(x)).norm() == 0.0);
    CHECK((out.alpha(x) - sys.alpha(x)).norm() == 0.0);
    CHECK(out.U(x) == sys.U(x));
  }
  SUBCASE("potential relation and the mu = 1 specialization") {
    const auto g = sample_gauge(s.domain, 0.4);
    const auto out = apply_gauge_mp(sys, g, k);
    const auto plain = apply_gauge_mp(sys, sample_gauge(s.domain, 0.0), k);
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
      const Vector x = oracle::random_disk_point(rng);
      CHECK(std::abs((out.U(x) - k) - g.mu(x) * (sys.U(g.f(x)) - k)) <= 1e-12);
      const Matrix J = g.Df(x);
      CHECK((plain.h(x) - J.transpose() * sys.h(g.f(x)) * J).cwiseAbs().maxCoeff() <= 1e-14);
      CHECK(std::abs(plain.U(x) - sys.U(g.f(x))) <= 1e-14);
    }
  }
  SUBCASE("gauging commutes with momentum scaling") {
    const auto unit = reduce(s, 1.0, m);
    const auto scaled_then_gauged = apply_gauge_mp(scale_momentum(unit, rho), sample_gauge(s.domain, 0.4), k);
    const auto gauged_then_scaled =
        scale_momentum(apply_gauge_mp(unit, sample_gauge(s.domain, 0.4, 1.0 / rho), k / (rho * rho)), rho);
    std::mt19937_64 rng(12);
    for (int i = 0; i < 100; ++i) {
      const Vector x = oracle::random_disk_point(rng);
      CHECK((scaled_then_gauged.h(x) - gauged_then_scaled.h(x)).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK((scaled_then_gauged.alpha(x) - gauged_then_scaled.alpha(x)).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK(std::abs(scaled_then_gauged.U(x) - gauged_then_scaled.U(x)) <= 1e-9);
    }
    CHECK(std::abs(scaled_then_gauged.k - gauged_then_scaled.k) <= 1e-15);
  }
}

TEST_CASE("scattering invariance") {
  const Spec s = rotating_disk(0.1);
  SUBCASE("a spec against itself") {
    const auto rep = verify_scattering_invariance(s, s, -3.0, 1.0, 8);
    CHECK(rep.pass);
    CHECK(rep.max_deviation() == 0.0);
  }
  SUBCASE("gauge-related specs at two momenta") {
    for (double rho : {-3.0, -2.2}) {
      const Spec b = apply_gauge_ssm(s, sample_gauge(s.domain), rho, 1.0);
      const auto rep = verify_scattering_invariance(s, b, rho, 1.0, 12);
      INFO("rho = " << rho << ", deviation " << rep.max_deviation());
      CHECK(rep.pass);
      CHECK(rep.compared == 12);
    }
  }
  SUBCASE("interior lapse perturbation is detected") {
    const auto rep = verify_scattering_invariance(s, perturbed_lapse(s), -3.0, 1.0, 12);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_deviation() >= 1e-3);
  }
  SUBCASE("different boundary traces are refused") {
    try {
      verify_scattering_invariance(s, rotating_disk(0.2), -3.0, 1.0, 4);
      FAIL("expected BoundaryTraceMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BoundaryTraceMismatch);
    }
  }
}

TEST_CASE("spacetime pullback by Psi") {
  const Spec s = rotating_disk(0.2);
  const double rho = -3.0;
  SUBCASE("trivial gauge") {
    const Spec out = psi_pullback(s, GaugeTransform::identity(2), rho);
    CHECK(field_gap(s, out).worst() <= 1e-15);
  }
  SUBCASE("time shift only touches the cross terms") {
    GaugeParams p;
    p.q = Expr<double>::monomial(0.5, {1, 1});
    const auto g = boundary_fixing_gauge(s.domain, p);
    const Spec out = psi_pullback(s, g, rho);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; ++i) {
      const Vector x = oracle::random_disk_point(rng);
      const Matrix a = oracle::spacetime_metric(s, x), b = oracle::spacetime_metric(out, x);
      CHECK(std::abs(a(0, 0) - b(0, 0)) <= 1e-14);
      CHECK((a.bottomRightCorner(2, 2) - b.bottomRightCorner(2, 2)).cwiseAbs().maxCoeff() > 0.0);
      // dt -> dt + dphi_hat adds g00 dphi_hat to the cross terms and the symmetric square to the spatial block
      const Vector dphi_hat = -g.phi.grad(x) / rho;
      const Vector cross = a.block(1, 0, 2, 1) + a(0, 0) * dphi_hat;
      CHECK((b.block(1, 0, 2, 1) - cross).cwiseAbs().maxCoeff() <= 1e-12);
      // read back as fields only omega moves
      CHECK((out.h(x) - s.h(x)).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(std::abs(out.lambda(x) - s.lambda(x)) <= 1e-14);
      CHECK((out.omega(x) - s.omega(x) + dphi_hat).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
  SUBCASE("full gauge agrees with a direct pullback") {
    const auto g = sample_gauge(s.domain);
    const Spec out = psi_pullback(s, g, rho);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
      const Vector x = oracle::random_disk_point(rng);
      Matrix D = Matrix::Zero(3, 3);
      D(0, 0) = 1;
      D.block(0, 1, 1, 2) = (-g.phi.grad(x) / rho).transpose();
      D.block(1, 1, 2, 2) = g.Df(x);
      const Matrix direct = D.transpose() * oracle::spacetime_metric(s, g.f(x)) * D;
      CHECK((oracle::spacetime_metric(out, x) - direct).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
  SUBCASE("non-unit mu is refused") {
    CHECK_THROWS_AS(psi_pullback(s, sample_gauge(s.domain, 0.3), rho), Error);
  }
}
