#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "stationary/expr.hpp"
#include "stationary/gallery.hpp"
#include "stationary/metric.hpp"

using namespace stationary;
using E = Expr<double>;

namespace {

Spec constant_spec(Matrix h, Vector w, double lambda) {
  const int n = static_cast<int>(w.size());
  MetricField<double> hf{[h](const Vector&) { return h; },
                         [n](const Vector&) { return std::vector<Matrix>(static_cast<std::size_t>(n), Matrix::Zero(n, n)); }};
  CovectorField<double> wf{[w](const Vector&) { return w; }, [n](const Vector&) { return Matrix(Matrix::Zero(n, n)); }};
  return {"const", unit_ball<double>(n), hf, wf, constant_scalar<double>(n, lambda)};
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

/// A generic smooth spec with non-Euclidean h for oracle comparisons.
Spec wavy_spec() {
  auto h = metric_from<double>({{E::constant(1) + E::monomial(0.3, {2, 0}) + E::monomial(0.1, {0, 1}),
                                 E::monomial(0.2, {1, 1}) + E({Term<double>{0.05, {}, Trig::Sin, {1.0, 2.0}, 0.3}})},
                                {E::constant(1.2) + E({Term<double>{0.2, {}, Trig::Cos, {2.0, -1.0}, 0.0}})}});
  auto w = covector_from<double>({E::monomial(0.3, {0, 1}) + E::monomial(-0.2, {1, 2}),
                                  E::monomial(0.4, {1, 0}) + E({Term<double>{0.1, {}, Trig::Sin, {1.5, 0.5}, 0.0}})});
  auto lam = E::constant(1.1) + E::monomial(0.4, {2, 0}) + E::monomial(-0.2, {1, 1}) +
             E({Term<double>{0.1, {}, Trig::Cos, {1.0, 1.0}, 0.2}});
  Spec s{"wavy", unit_ball<double>(2), h, w, lam.field()};
  validate(s);
  return s;
}

}  // namespace

TEST_CASE("flat block assembles to the Minkowski matrix") {
  const Spec s = constant_spec(Matrix::Identity(2, 2), Vector::Zero(2), 1.0);
  const auto g = assemble_g(s, vec2(0.3, -0.2));
  Matrix eta = Matrix::Identity(3, 3);
  eta(0, 0) = -1;
  CHECK((g.g - eta).cwiseAbs().maxCoeff() == 0.0);
  CHECK((g.g_inv - eta).cwiseAbs().maxCoeff() == 0.0);
  CHECK(g.lorentzian);
}

TEST_CASE("shifted block and its inverse match direct inversion") {
  const Spec s = constant_spec(Matrix::Identity(2, 2), vec2(0.1, 0.0), 2.0);
  const auto g = assemble_g(s, Vector(Vector::Zero(2)));
  CHECK(g.g(0, 0) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(g.g(0, 1) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(g.g(1, 1) == doctest::Approx(0.98).epsilon(1e-15));
  CHECK(g.g(2, 2) == doctest::Approx(1.0).epsilon(1e-15));
  const Matrix lu_inv = g.g.fullPivLu().inverse();
  CHECK(g.g_inv(0, 0) == doctest::Approx(-0.5 + 0.01).epsilon(1e-14));
  CHECK((g.g_inv - lu_inv).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((g.g * g.g_inv - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("assembled metric is exactly symmetric and Lorentzian across samples") {
  const Spec s = wavy_spec();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const Vector x = oracle::random_disk_point(rng);
    const auto g = assemble_g(s, x);
    CHECK((g.g - g.g.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.lorentzian);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(g.g);
    CHECK(eig.eigenvalues()(0) < 0);
    CHECK(eig.eigenvalues()(1) > 0);
    const Matrix lu = g.g.fullPivLu().inverse();
    CHECK((g.g_inv - lu).cwiseAbs().maxCoeff() <= 1e-10 * (1 + lu.cwiseAbs().maxCoeff()));
    CHECK((g.g - oracle::spacetime_metric(s, x)).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("assembly rejects points outside N and non-positive lambda") {
  const Spec s = constant_spec(Matrix::Identity(2, 2), Vector::Zero(2), 1.0);
  CHECK_THROWS_AS(assemble_g(s, vec2(1.5, 0.0)), Error);
  try {
    assemble_g(s, vec2(1.5, 0.0));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfDomain);
  }
  const Spec bad = constant_spec(Matrix::Identity(2, 2), Vector::Zero(2), -1.0);
  try {
    assemble_g(bad, vec2(0.0, 0.0));
    FAIL("expected NonLorentzian");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonLorentzian);
  }
}

TEST_CASE("tilde conversion") {
  SUBCASE("zero shift is the identity") {
    TildeSpec<double> t{"t", unit_ball<double>(2), euclidean_metric<double>(2), zero_covector<double>(2), constant_scalar<double>(2, 1.0)};
    const Spec s = convert_tilde(t);
    const Vector x = vec2(0.2, 0.1);
    CHECK((s.h(x) - Matrix::Identity(2, 2)).norm() == 0.0);
    CHECK(s.omega(x).norm() == 0.0);
    CHECK(s.lambda(x) == 1.0);
  }
  SUBCASE("hand-evaluated example and round trip") {
    TildeSpec<double> t{"t", unit_ball<double>(2), euclidean_metric<double>(2),
                        covector_from<double>({E::constant(1), E::constant(0)}), constant_scalar<double>(2, 2.0)};
    const Spec s = convert_tilde(t);
    const Vector x = vec2(0.0, 0.3);
    Matrix expected(2, 2);
    expected << 1.5, 0, 0, 1;
    CHECK((s.h(x) - expected).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((s.omega(x) - vec2(0.5, 0)).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((assemble_g_tilde(t, x) - assemble_g(s, x).g).cwiseAbs().maxCoeff() <= 1e-12);
    const Vector wt = s.lambda(x) * s.omega(x);
    const Matrix ht = s.h(x) - s.lambda(x) * s.omega(x) * s.omega(x).transpose();
    CHECK((wt - vec2(1, 0)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((ht - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("acoustic gallery entry agrees with its tilde presentation") {
    const Spec s = acoustic_analogue();
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
      const Vector x = oracle::random_disk_point(rng);
      const Vector u = vec2(-0.2 * x(1) - 0.1 * x(0), 0.2 * x(0) - 0.1 * x(1));
      Matrix g(3, 3);
      g(0, 0) = -(1 - u.squaredNorm());
      g.block(0, 1, 1, 2) = -u.transpose();
      g.block(1, 0, 2, 1) = -u;
      g.block(1, 1, 2, 2) = Matrix::Identity(2, 2);
      CHECK((assemble_g(s, x).g - g).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
  SUBCASE("non-positive lambda is rejected") {
    TildeSpec<double> t{"t", unit_ball<double>(2), euclidean_metric<double>(2), zero_covector<double>(2),
                        (E::constant(0.5) + E::monomial(-1.0, {2, 0})).field()};
    try {
      convert_tilde(t);
      FAIL("expected NonLorentzian");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonLorentzian);
    }
  }
}

TEST_CASE("Christoffel symbols of h") {
  SUBCASE("Euclidean metric has none") {
    const auto G = christoffel_h(euclidean_metric<double>(2), vec2(0.3, 0.4));
    for (const auto& m : G.upper) CHECK(m.norm() == 0.0);
  }
  SUBCASE("warped product example") {
    auto h = metric_from<double>({{E::constant(1), E::constant(0)}, {E::constant(1) + E::monomial(1.0, {2, 0})}});
    Spec s{"warped", unit_ball<double>(2, 2.0), h, zero_covector<double>(2), constant_scalar<double>(2, 1.0)};
    const Vector x = vec2(1.0, 0.0);
    const auto G = christoffel_h(s, x);
    CHECK(G(1, 0, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(G(1, 1, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(G(0, 1, 1) == doctest::Approx(-1.0).epsilon(1e-14));
    const auto oracle_gamma = oracle::spatial_christoffel(s, x);
    for (int l = 0; l < 2; ++l) CHECK((G.upper[static_cast<std::size_t>(l)] - oracle_gamma[static_cast<std::size_t>(l)]).cwiseAbs().maxCoeff() <= 1e-9);
  }
  SUBCASE("symmetry and metric compatibility, analytic and finite-difference") {
    const Spec s = wavy_spec();
    const Spec fd_base = s;
    Spec fd = fd_base;
    fd.h.derivative = nullptr;
    CHECK(fd.derivative_mode() == DerivativeMode::FiniteDifference);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
      const Vector x = oracle::random_disk_point(rng);
      for (const Spec* spec : {&s, static_cast<const Spec*>(&fd)}) {
        const auto G = christoffel_h(*spec, x);
        const auto dh = spec->h.partials(x);
        const Matrix h = spec->h(x);
        double worst = 0;
        for (int k = 0; k < 2; ++k)
          for (int i2 = 0; i2 < 2; ++i2)
            for (int j = 0; j < 2; ++j) {
              double r = dh[static_cast<std::size_t>(k)](i2, j);
              for (int l = 0; l < 2; ++l) r -= G(l, k, i2) * h(l, j) + G(l, k, j) * h(i2, l);
              worst = std::max(worst, std::abs(r));
            }
        CHECK(worst <= (spec == &s ? 1e-6 : 1e-4));
        for (const auto& m : G.upper) CHECK((m - m.transpose()).norm() == 0.0);
      }
    }
  }
  SUBCASE("degenerate h is reported") {
    MetricField<double> h{[](const Vector&) { return Matrix(Matrix::Zero(2, 2)); }, {}};
    try {
      christoffel_h(h, vec2(0, 0));
      FAIL("expected DegenerateMetric");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateMetric);
    }
  }
}

TEST_CASE("closed-form Christoffel symbols of g") {
  SUBCASE("flat") {
    const auto G = christoffel_g(flat_disk(), vec2(0.1, 0.2));
    for (const auto& m : G.upper) CHECK(m.norm() == 0.0);
  }
  SUBCASE("static lapse") {
    const Spec s = bumpy_lambda(0.5);
    const Vector x = vec2(0.3, -0.4);
    const auto G = christoffel_g(s, x);
    const Vector dl = s.lambda.grad(x);
    const double l = s.lambda(x);
    for (int i = 0; i < 2; ++i) {
      CHECK(G(i + 1, 0, 0) == doctest::Approx(0.5 * dl(i)).epsilon(1e-14));
      CHECK(G(0, i + 1, 0) == doctest::Approx(dl(i) / (2 * l)).epsilon(1e-14));
      CHECK(G.upper[static_cast<std::size_t>(i + 1)].bottomRightCorner(2, 2).norm() == 0.0);
    }
  }
  SUBCASE("agreement with the finite-difference Levi-Civita oracle") {
    std::mt19937_64 rng(5);
    for (const Spec& s : {wavy_spec(), rotating_disk(), acoustic_analogue()}) {
      double worst = 0;
      for (int i = 0; i < 300; ++i) {
        const Vector x = oracle::random_disk_point(rng);
        const auto G = christoffel_g(s, x);
        const auto O = oracle::spacetime_christoffel(s, x);
        for (int mu = 0; mu < 3; ++mu)
          worst = std::max(worst, (G.upper[static_cast<std::size_t>(mu)] - O[static_cast<std::size_t>(mu)]).cwiseAbs().maxCoeff());
      }
      CAPTURE(s.name);
      CHECK(worst <= 1e-6);
    }
  }
}

TEST_CASE("spec validation catches broken invariants") {
  Spec s = flat_disk();
  s.lambda = constant_scalar<double>(2, 0.0);
  CHECK_THROWS_AS(validate(s), Error);
  Spec t = flat_disk();
  t.h.value = [](const Vector&) {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
  };
  try {
    validate(t);
    FAIL("expected InvalidSpec");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSpec);
  }
}

TEST_CASE("boundary sampling lands on the boundary") {
  const auto d = unit_ball<double>(2);
  for (const auto& x : boundary_samples(d, 50, 0.1)) CHECK(on_boundary(d, x));
  const auto d3 = unit_ball<double>(3, 0.7);
  for (const auto& x : boundary_samples(d3, 20)) CHECK(x.norm() == doctest::Approx(0.7).epsilon(1e-12));
}
