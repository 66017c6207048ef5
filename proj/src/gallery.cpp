#include "stationary/gallery.hpp"

#include "stationary/expr.hpp"

namespace stationary {

namespace {

using E = Expr<double>;

E mono(double c, int px, int py) { return E::monomial(c, {px, py}); }

E wave(double c, Trig trig, double kx, double ky, int px = 0, int py = 0) {
  return E({Term<double>{c, {px, py}, trig, {kx, ky}, 0.0}});
}

MetricField<double> identity2() { return metric_from<double>({{E::constant(1), E::constant(0)}, {E::constant(1)}}); }

Spec make(std::string name, CovectorField<double> omega, E lambda) {
  Spec s{std::move(name), unit_ball<double>(2), identity2(), std::move(omega), lambda.field()};
  validate(s);
  return s;
}

}  // namespace

std::vector<GalleryEntry> gallery_catalog() {
  return {
      {"flat-disk", "", 0, "h = I, omega = 0, lambda = 1 on the unit disk (Minkowski cylinder)"},
      {"rotating-disk", "epsilon", 0.1, "h = I, omega = epsilon (-y, x), lambda = 1 + x^2 / 2"},
      {"bumpy-lambda", "epsilon", 0.5, "h = I, omega = 0, lambda = 1 + epsilon (x^2 + 0.4 sin(3x) cos(2y))"},
      {"magnetic-disk", "c", 0.5, "h = I, omega = (c/2)(-y, x) so d omega = c dx^dy, lambda = 1"},
      {"acoustic-analogue", "swirl", 0.2,
       "acoustic metric of the flow u = swirl (-y, x) - 0.1 (x, y): lambda = 1 - |u|^2, omega~ = -u, h~ = I"},
  };
}

Spec flat_disk() {
  return make("flat-disk", covector_from<double>({E::constant(0), E::constant(0)}), E::constant(1));
}

Spec rotating_disk(double epsilon) {
  return make("rotating-disk", covector_from<double>({mono(-epsilon, 0, 1), mono(epsilon, 1, 0)}),
              E::constant(1) + mono(0.5, 2, 0));
}

Spec bumpy_lambda(double epsilon) {
  // sin(3x) cos(2y) = (sin(3x + 2y) + sin(3x - 2y)) / 2
  E lam = E::constant(1) + mono(epsilon, 2, 0) + wave(0.2 * epsilon, Trig::Sin, 3, 2) + wave(0.2 * epsilon, Trig::Sin, 3, -2);
  return make("bumpy-lambda", covector_from<double>({E::constant(0), E::constant(0)}), lam);
}

Spec magnetic_disk(double c) {
  return make("magnetic-disk", covector_from<double>({mono(-0.5 * c, 0, 1), mono(0.5 * c, 1, 0)}), E::constant(1));
}

Spec acoustic_analogue(double swirl) {
  const double sink = 0.1;
  // u = (-swirl y - sink x, swirl x - sink y), |u|^2 = (swirl^2 + sink^2) r^2
  const double a2 = swirl * swirl + sink * sink;
  TildeSpec<double> t;
  t.name = "acoustic-analogue";
  t.domain = unit_ball<double>(2);
  t.h_tilde = identity2();
  t.omega_tilde = covector_from<double>({mono(swirl, 0, 1) + mono(sink, 1, 0), mono(-swirl, 1, 0) + mono(sink, 0, 1)});
  t.lambda = (E::constant(1) + mono(-a2, 2, 0) + mono(-a2, 0, 2)).field();
  return convert_tilde(t);
}

Spec gallery_spec(const std::string& name, std::optional<double> value) {
  for (const auto& e : gallery_catalog()) {
    if (e.name != name) continue;
    const double v = value.value_or(e.default_value);
    if (name == "flat-disk") return flat_disk();
    if (name == "rotating-disk") return rotating_disk(v);
    if (name == "bumpy-lambda") return bumpy_lambda(v);
    if (name == "magnetic-disk") return magnetic_disk(v);
    return acoustic_analogue(v);
  }
  throw Error(ErrorCode::ConfigError, "unknown gallery manifold '" + name + "'");
}

}  // namespace stationary
