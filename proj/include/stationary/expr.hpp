#pragma once

// Coefficient-table field expressions: finite sums of
//   c * prod_i x_i^{p_i} * trig(k . x + phase)
// with trig one of {1, sin, cos}. Analytic gradients come for free, which
// keeps every configured manifold in analytic-derivative mode.

#include "stationary/fields.hpp"

#include <cmath>
#include <vector>

namespace stationary {

enum class Trig { None, Sin, Cos };

template <typename Scalar>
struct Term {
  Scalar coeff{1};
  std::vector<int> powers;  // empty means all zero
  Trig trig = Trig::None;
  std::vector<Scalar> freq;  // wave vector for trig terms
  Scalar phase{0};
};

template <typename Scalar>
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::vector<Term<Scalar>> terms) : terms_(std::move(terms)) {}

  static Expr constant(Scalar c) { return Expr({Term<Scalar>{c, {}, Trig::None, {}, 0}}); }
  static Expr monomial(Scalar c, std::vector<int> powers) {
    return Expr({Term<Scalar>{c, std::move(powers), Trig::None, {}, 0}});
  }

  Expr& operator+=(const Expr& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
  }
  friend Expr operator+(Expr a, const Expr& b) { return a += b; }

  const std::vector<Term<Scalar>>& terms() const { return terms_; }

  Scalar operator()(const Vec<Scalar>& x) const {
    Scalar sum{0};
    for (const auto& t : terms_) sum += t.coeff * poly(t, x) * wave(t, x);
    return sum;
  }

  Vec<Scalar> gradient(const Vec<Scalar>& x) const {
    Vec<Scalar> g = Vec<Scalar>::Zero(x.size());
    for (const auto& t : terms_) {
      const Scalar p = poly(t, x);
      const Scalar w = wave(t, x);
      for (Eigen::Index k = 0; k < x.size(); ++k) {
        g(k) += t.coeff * (poly_partial(t, x, k) * w + p * wave_partial(t, x, k));
      }
    }
    return g;
  }

  ScalarField<Scalar> field() const {
    auto self = *this;
    return {[self](const Vec<Scalar>& x) { return self(x); },
            [self](const Vec<Scalar>& x) { return self.gradient(x); }};
  }

 private:
  static int power(const Term<Scalar>& t, Eigen::Index i) {
    return i < static_cast<Eigen::Index>(t.powers.size()) ? t.powers[static_cast<std::size_t>(i)] : 0;
  }

  static Scalar poly(const Term<Scalar>& t, const Vec<Scalar>& x) {
    Scalar p{1};
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const int e = power(t, i);
      if (e != 0) p *= std::pow(x(i), e);
    }
    return p;
  }

  static Scalar poly_partial(const Term<Scalar>& t, const Vec<Scalar>& x, Eigen::Index k) {
    const int ek = power(t, k);
    if (ek == 0) return Scalar(0);
    Scalar p = Scalar(ek) * (ek == 1 ? Scalar(1) : std::pow(x(k), ek - 1));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const int e = power(t, i);
      if (i != k && e != 0) p *= std::pow(x(i), e);
    }
    return p;
  }

  static Scalar argument(const Term<Scalar>& t, const Vec<Scalar>& x) {
    Scalar a = t.phase;
    for (std::size_t i = 0; i < t.freq.size() && static_cast<Eigen::Index>(i) < x.size(); ++i) {
      a += t.freq[i] * x(static_cast<Eigen::Index>(i));
    }
    return a;
  }

  static Scalar wave(const Term<Scalar>& t, const Vec<Scalar>& x) {
    switch (t.trig) {
      case Trig::Sin: return std::sin(argument(t, x));
      case Trig::Cos: return std::cos(argument(t, x));
      case Trig::None: break;
    }
    return Scalar(1);
  }

  static Scalar wave_partial(const Term<Scalar>& t, const Vec<Scalar>& x, Eigen::Index k) {
    if (t.trig == Trig::None || k >= static_cast<Eigen::Index>(t.freq.size())) return Scalar(0);
    const Scalar kk = t.freq[static_cast<std::size_t>(k)];
    return t.trig == Trig::Sin ? kk * std::cos(argument(t, x)) : -kk * std::sin(argument(t, x));
  }

  std::vector<Term<Scalar>> terms_;
};

template <typename Scalar>
CovectorField<Scalar> covector_from(std::vector<Expr<Scalar>> components) {
  auto value = [components](const Vec<Scalar>& x) {
    Vec<Scalar> w(static_cast<Eigen::Index>(components.size()));
    for (std::size_t i = 0; i < components.size(); ++i) w(static_cast<Eigen::Index>(i)) = components[i](x);
    return w;
  };
  auto jacobian = [components](const Vec<Scalar>& x) {
    const auto n = static_cast<Eigen::Index>(components.size());
    Mat<Scalar> j(n, n);
    for (Eigen::Index i = 0; i < n; ++i) j.col(i) = components[static_cast<std::size_t>(i)].gradient(x);
    return j;
  };
  return {value, jacobian};
}

/// Symmetric metric from its upper triangle given row by row: row i holds
/// the entries (i, i), (i, i + 1), ..., (i, n - 1).
template <typename Scalar>
MetricField<Scalar> metric_from(std::vector<std::vector<Expr<Scalar>>> entries) {
  const auto n = static_cast<Eigen::Index>(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].size() != entries.size() - i) throw Error(ErrorCode::InvalidSpec, "metric rows must form an upper triangle");
  }
  auto entry = [entries](Eigen::Index i, Eigen::Index j) -> const Expr<Scalar>& {
    if (i > j) std::swap(i, j);
    return entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - i)];
  };
  auto value = [n, entry](const Vec<Scalar>& x) {
    Mat<Scalar> h(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j) h(i, j) = h(j, i) = entry(i, j)(x);
    return h;
  };
  auto derivative = [n, entry](const Vec<Scalar>& x) {
    std::vector<Mat<Scalar>> d(static_cast<std::size_t>(n), Mat<Scalar>(n, n));
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j) {
        const Vec<Scalar> g = entry(i, j).gradient(x);
        for (Eigen::Index k = 0; k < n; ++k) d[static_cast<std::size_t>(k)](i, j) = d[static_cast<std::size_t>(k)](j, i) = g(k);
      }
    return d;
  };
  return {value, derivative};
}

}  // namespace stationary
